//! Browkin and Ruban p-adic continued fractions of quadratic irrationals,
//! computed over exact integers.

pub mod analysis;
pub mod cf;
pub mod checks;
pub mod constructor;
pub mod error;
pub mod padic;

pub use cf::{Expansion, Flavor, LaurentInt, QuadIrr, QuadSpec, Status};
pub use constructor::{ConstructionResult, NiceCertificate, NiceOutcome};
pub use error::{Error, Result};
pub use padic::OddPrime;
