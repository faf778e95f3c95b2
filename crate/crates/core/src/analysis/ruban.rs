use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::{expand, Flavor, QuadIrr, QuadSpec, Status, Stepper};
use crate::error::{Error, Result};
use crate::padic::{split_p, OddPrime, PadicSqrt};

/// Outcome of expanding `p^k√m` with Ruban digits.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RubanProbe {
    #[serde_as(as = "DisplayFromStr")]
    pub m: BigInt,
    pub k: i64,
    pub branch: u64,
    pub steps: usize,
    /// `Open` when no period appeared within `steps`; never reported as
    /// non-periodic.
    pub status: Status,
    /// `ã_1 = p^k a_1`.
    #[serde_as(as = "DisplayFromStr")]
    pub a1_tilde: BigInt,
    /// The computed `α_2` in `Δ,b,c,k,branch` form.
    pub alpha2: QuadSpec,
    /// Both real embeddings of `α_2` are negative; `None` when `m < 0`.
    pub alpha2_negative: Option<bool>,
    /// `α_2 = p^k(√m + ã_1 m)/(1 − ã_1² m)` as exact quadratic irrationals.
    pub formula_matches: bool,
}

impl RubanProbe {
    /// No period found and, for real `√m`, the negative-embedding witness.
    pub fn consistent(&self) -> bool {
        matches!(self.status, Status::Open { .. })
            && self.formula_matches
            && self.alpha2_negative != Some(false)
    }
}

/// Expands `α = p^k√m` (`p ∤ m`, `k > 0`) for `steps` Ruban steps and checks
/// the closed form of `α_2`.
pub fn ruban_nonperiodic_probe(
    m: &BigInt,
    k: i64,
    branch: Option<u64>,
    steps: usize,
    p: &OddPrime,
) -> Result<RubanProbe> {
    if k <= 0 {
        return Err(Error::Domain("probe needs k > 0".into()));
    }
    if split_p(m, p).0 != 0 {
        return Err(Error::Domain(format!("probe needs {p} ∤ m")));
    }
    let root = match branch {
        Some(b) => PadicSqrt::new(m, b, p)?,
        None => PadicSqrt::principal(m, p)?,
    };
    let branch = root.branch();
    let root = Arc::new(root);
    let alpha = QuadIrr::from_root(root.clone(), BigInt::from(0), BigInt::one(), -k)?;
    let mut stepper = Stepper::new(alpha.clone(), Flavor::Ruban);
    stepper.advance()?;
    let a1 = stepper.advance()?;
    let alpha2 = stepper.state().clone();
    let pk = BigRational::from_integer(p.pow(k as u64));
    let a1t = &a1.to_rational() * &pk;
    debug_assert!(a1t.is_integer());
    let a1_tilde = a1t.to_integer();
    let mr = BigRational::from_integer(m.clone());
    let den = BigRational::one() - &a1t * &a1t * &mr;
    let formula = QuadIrr::from_surd(&(&pk * &a1t * &mr / &den), &(&pk / &den), &root)?;
    let (b2, c2) = (alpha2.b(), alpha2.c());
    let alpha2_negative = m
        .is_positive()
        .then(|| (b2 * c2).is_negative() && b2 * b2 > *alpha2.delta());
    let e = expand(&alpha, Flavor::Ruban, steps)?;
    Ok(RubanProbe {
        m: m.clone(),
        k,
        branch,
        steps,
        status: e.status,
        a1_tilde,
        alpha2: alpha2.spec(),
        alpha2_negative,
        formula_matches: formula.same_value(&alpha2),
    })
}

/// `δ/p^h` with `δ² = 1 + p^{2h}`, `δ ≡ 1 (mod p)`, whose Ruban expansion is
/// `[1/p^h, (2/p^h)*]`.
pub fn ruban_periodic_family(h: u32, p: &OddPrime) -> Result<QuadIrr> {
    let delta = BigInt::one() + p.pow(2 * h as u64);
    let root = Arc::new(PadicSqrt::new(&delta, 1, p)?);
    QuadIrr::from_root(root, BigInt::from(0), BigInt::one(), h as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::LaurentInt;

    #[test]
    fn probe_small() {
        let p5 = OddPrime::new(5).unwrap();
        let r = ruban_nonperiodic_probe(&BigInt::from(14), 1, None, 300, &p5).unwrap();
        assert!(r.consistent(), "{r:?}");
        assert_eq!(r.alpha2_negative, Some(true));
        let r = ruban_nonperiodic_probe(&BigInt::from(-1), 2, None, 300, &p5).unwrap();
        assert!(r.formula_matches);
        assert_eq!(r.alpha2_negative, None);
        assert!(ruban_nonperiodic_probe(&BigInt::from(10), 1, None, 10, &p5).is_err());
    }

    #[test]
    fn periodic_family() {
        let p5 = OddPrime::new(5).unwrap();
        for h in 1..=3 {
            let a = ruban_periodic_family(h, &p5).unwrap();
            let e = expand(&a, Flavor::Ruban, 100).unwrap();
            assert_eq!(
                e.preperiod,
                vec![LaurentInt::new(BigInt::one(), h as i64, &p5)]
            );
            assert_eq!(
                e.period,
                Some(vec![LaurentInt::new(BigInt::from(2), h as i64, &p5)])
            );
        }
    }
}
