//! Nice continued fractions and the periodic square roots built from them.

mod beta;
mod construct;
mod family;
mod nice;
mod search;

pub use beta::{
    beta, beta_polynomials, beta_value, fold, fold_identities, power_of_two_seed, s_tilde_at,
    BetaPolynomials, FoldVerdict,
};
pub use construct::{
    construct, ConstructOptions, ConstructionChecks, ConstructionResult, DEFAULT_MAX_OMEGA,
};
pub use family::{family_section6, FamilyReport, LiteralCheck};
pub use nice::{is_nice, positive_shortcut, NiceCertificate, NiceCondition, NiceOutcome};
pub use search::{
    nice_search, nice_search_all, single_quotient_band, Pool, SearchCursor, SearchHit,
    SearchLimits, SearchSpace,
};
