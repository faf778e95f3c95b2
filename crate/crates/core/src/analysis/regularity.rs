use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::{expand, Expansion, Flavor, LaurentInt, QuadIrr, Stepper};
use crate::error::{Error, Result};

/// `α^c`, the algebraic conjugate.
pub fn conjugate(alpha: &QuadIrr) -> QuadIrr {
    alpha.conjugate()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub v_alpha: i64,
    pub v_conj: i64,
    /// `v_p(α) < 0` and `v_p(α^c) > 0`.
    pub regular: bool,
    /// `v_p(α − α^c)`.
    pub v_diff: i64,
    /// Least `n` with `α_n` regular, searched up to `preperiod_bound + 1`.
    pub first_regular_index: Option<usize>,
    /// `n₀ + 1`, where `n₀` is the least natural number `≥ v_p(α − α^c)/2`.
    pub preperiod_bound: usize,
}

fn regular(alpha: &QuadIrr) -> Result<bool> {
    Ok(alpha.valuation()? < 0 && alpha.conjugate().valuation()? > 0)
}

pub fn is_regular(alpha: &QuadIrr) -> Result<RegularityReport> {
    let v_alpha = alpha.valuation()?;
    let v_conj = alpha.conjugate().valuation()?;
    // α − α^c = 2δ/(p^k c), with p ∤ 2c
    let v_diff = alpha.root().half_valuation() as i64 - alpha.k();
    let n0 = if v_diff <= 0 {
        0
    } else {
        ((v_diff + 1) / 2) as usize
    };
    let preperiod_bound = n0 + 1;
    let mut stepper = Stepper::new(alpha.clone(), Flavor::Browkin);
    let mut first = None;
    for n in 0..=preperiod_bound + 1 {
        if regular(stepper.state())? {
            first = Some(n);
            break;
        }
        stepper.advance()?;
    }
    Ok(RegularityReport {
        v_alpha,
        v_conj,
        regular: v_alpha < 0 && v_conj > 0,
        v_diff,
        first_regular_index: first,
        preperiod_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisVerdict {
    pub pass: bool,
    pub preperiod_len: usize,
    pub regular: bool,
    pub first_regular_index: Option<usize>,
    pub preperiod_bound: usize,
    pub witness: String,
}

/// For a periodic Browkin expansion: the preperiod is empty exactly when `α`
/// is regular, its length is the first index of a regular complete
/// quotient, and it does not exceed `n₀ + 1`.
pub fn galois_check(alpha: &QuadIrr, expansion: &Expansion) -> Result<GaloisVerdict> {
    if !expansion.is_periodic() {
        return Err(Error::Domain(
            "galois_check needs a periodic expansion".into(),
        ));
    }
    let rep = is_regular(alpha)?;
    let len = expansion.preperiod.len();
    let mut witness = Vec::new();
    if (len == 0) != rep.regular {
        witness.push(format!(
            "preperiod length {len} but regular = {}",
            rep.regular
        ));
    }
    if rep.first_regular_index != Some(len) {
        witness.push(format!(
            "preperiod length {len} but first regular index {:?}",
            rep.first_regular_index
        ));
    }
    if len > rep.preperiod_bound {
        witness.push(format!(
            "preperiod length {len} exceeds bound {}",
            rep.preperiod_bound
        ));
    }
    Ok(GaloisVerdict {
        pass: witness.is_empty(),
        preperiod_len: len,
        regular: rep.regular,
        first_regular_index: rep.first_regular_index,
        preperiod_bound: rep.preperiod_bound,
        witness: witness.join("; "),
    })
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversalReport {
    pub period: Vec<LaurentInt>,
    /// The reversed period `[a_{N−1}, …, a_0]`.
    pub reversed: Vec<LaurentInt>,
    /// Expansion of `−1/α^c`.
    pub inverse_conj: Expansion,
    /// `−1/α^c = [(a_{N−1}, …, a_0)*]`.
    pub reversal_holds: bool,
    /// `α^c = [0, (−a_{N−1}, …, −a_0)*]`.
    pub conjugate_holds: bool,
    pub palindromic: bool,
    #[serde_as(as = "DisplayFromStr")]
    pub norm: BigRational,
    /// For a palindromic period, whether `N(α) = −1`.
    pub palindrome_norm_holds: Option<bool>,
}

/// Checks the reversed-period identities of a purely periodic Browkin
/// expansion.
pub fn reversed_period_identity(alpha: &QuadIrr, max_steps: usize) -> Result<ReversalReport> {
    let e = expand(alpha, Flavor::Browkin, max_steps)?;
    if !e.is_purely_periodic() {
        return Err(Error::Domain(
            "reversed_period_identity needs a purely periodic expansion".into(),
        ));
    }
    let period = e.period.clone().expect("periodic");
    let reversed: Vec<LaurentInt> = period.iter().rev().cloned().collect();
    let conj = alpha.conjugate();
    let inv = conj.reciprocal()?.neg();
    let inverse_conj = expand(&inv, Flavor::Browkin, max_steps)?;
    let reversal_holds =
        inverse_conj.is_purely_periodic() && inverse_conj.period.as_ref() == Some(&reversed);
    let ce = expand(&conj, Flavor::Browkin, max_steps)?;
    let negated: Vec<LaurentInt> = reversed.iter().map(|q| -q).collect();
    let conjugate_holds = ce.is_periodic()
        && ce.preperiod.len() == 1
        && ce.preperiod[0].is_zero()
        && ce.period.as_ref() == Some(&negated);
    let palindromic = period == reversed;
    let norm = alpha.norm();
    let minus_one = -BigRational::one();
    Ok(ReversalReport {
        period,
        reversed,
        inverse_conj,
        reversal_holds,
        conjugate_holds,
        palindromic,
        palindrome_norm_holds: palindromic.then(|| norm == minus_one),
        norm,
    })
}

/// For regular `α`, expanding `−1/α^c_{n+1}` starts with `a_n, …, a_0`.
pub fn reversal_prefix_check(alpha: &QuadIrr, n: usize) -> Result<bool> {
    if !regular(alpha)? {
        return Err(Error::Domain(
            "reversal_prefix_check needs a regular α".into(),
        ));
    }
    let mut stepper = Stepper::new(alpha.clone(), Flavor::Browkin);
    let mut qs = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        qs.push(stepper.advance()?);
    }
    let tail = stepper.state().conjugate().reciprocal()?.neg();
    let mut back = Stepper::new(tail, Flavor::Browkin);
    for expected in qs.iter().rev() {
        if &back.advance()? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `v_p(α − α^c)` computed from the surd form `x + yδ`, independently of the
/// stored state.
pub fn conjugate_gap(alpha: &QuadIrr) -> Result<i64> {
    let (_, y) = alpha.surd_parts();
    let two_y = y * num_bigint::BigInt::from(2);
    debug_assert!(!two_y.is_zero());
    let vy = crate::padic::vp_rational(&two_y, alpha.prime())
        .finite()
        .expect("nonzero");
    Ok(vy + alpha.root().half_valuation() as i64)
}
