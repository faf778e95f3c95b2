//! Browkin and Ruban continued fractions over `Z[1/p]`.
//!
//! Quadratic irrationals are stepped exactly on the integer state
//! `(b, c, k)`; only the s-function needs p-adic digits of the square root.

mod audit;
mod convergents;
mod engine;
mod laurent;
mod limit;
mod quad;

pub use audit::{valuation_audit, AuditReport, AuditViolation};
pub use convergents::{eval_finite, ConvergentTable};
pub use engine::{
    expand, expand_rational, inv_p_pow, s_browkin, s_quad, s_rational, s_ruban, step, Expansion,
    Flavor, Status, Stepper, DEFAULT_MAX_STEPS,
};
pub use laurent::{format_quotients, parse_quotients, LaurentInt, PartialQuotient};
pub use limit::{limit_candidates, limit_polynomial, periodic_limit, LimitCandidates};
pub use quad::{QuadIrr, QuadNumber, QuadSpec};
