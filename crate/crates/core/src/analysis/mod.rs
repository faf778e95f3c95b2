//! Structural statements about expansions: regularity, conjugates and
//! reversed periods, norm-sign criteria, trace-zero numbers and the Ruban
//! contrast.

mod norms;
mod regularity;
mod ruban;
mod trace_zero;

pub use norms::{
    b_sequence_analysis, k_bound, k_bound_brute, BSequenceReport, NormSign, NormSignTrace,
    WindowVerdict,
};
pub use regularity::{
    conjugate, conjugate_gap, galois_check, is_regular, reversal_prefix_check,
    reversed_period_identity, GaloisVerdict, RegularityReport, ReversalReport,
};
pub use ruban::{ruban_nonperiodic_probe, ruban_periodic_family, RubanProbe};
pub use trace_zero::{
    dt_identities, match_trace_zero_template, trace_zero_classify, DtVerdict, Parity,
    TemplateMatch, TraceZeroClass,
};
