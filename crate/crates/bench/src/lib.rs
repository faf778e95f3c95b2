//! Inputs shared by the benchmarks.

use std::str::FromStr;

use padicf::cf::{parse_quotients, QuadIrr, QuadSpec};
use padicf::constructor::{is_nice, NiceCertificate, NiceOutcome};
use padicf::padic::DEFAULT_DLOG_BUDGET;
use padicf::OddPrime;

pub fn prime(p: u64) -> OddPrime {
    OddPrime::new(p).expect("odd prime")
}

/// `Δ,b,c,k,branch` over `p`.
pub fn quad(spec: &str, p: u64) -> QuadIrr {
    QuadSpec::from_str(spec)
        .and_then(|s| s.normalize(&prime(p)))
        .expect("valid quadratic irrational")
}

/// Purely periodic with period 12 over 5.
pub fn period_twelve() -> QuadIrr {
    quad("19,-13,6,1,2", 5)
}

/// No period within 10 000 steps over 5.
pub fn open_root() -> QuadIrr {
    quad("89,8,1,1,3", 5)
}

pub fn certificate(cf: &str, p: u64) -> NiceCertificate {
    let p = prime(p);
    let cf = parse_quotients(cf, &p).expect("quotients");
    match is_nice(&cf, &p, DEFAULT_DLOG_BUDGET).expect("decidable") {
        NiceOutcome::Nice(c) => c,
        other => panic!("{other:?}"),
    }
}
