use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::convergents::ConvergentTable;
use super::engine::{expand, Flavor};
use super::laurent::LaurentInt;
use super::quad::{primitive_poly, QuadIrr, QuadNumber};
use crate::error::{Error, Result};
use crate::padic::{is_perfect_square, padic_square_exists, sqrt_mod_p, OddPrime, PadicSqrt};

/// The quadratic satisfied by `[pre, (period)*]`, as the two candidate roots
/// `x ± y√D` before a branch is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCandidates {
    pub x: BigRational,
    pub y: BigRational,
    pub d: BigInt,
    /// Primitive integer coefficients `[a₂, a₁, a₀]`.
    pub min_poly: [BigInt; 3],
}

fn transport(pre: &ConvergentTable, z: &QuadNumber) -> Result<QuadNumber> {
    // [pre, z] = (A_{m−1}z + A_{m−2})/(B_{m−1}z + B_{m−2})
    let m = pre.len() as isize;
    if m == 0 {
        return Ok(z.clone());
    }
    z.mobius(&pre.a(m - 1), &pre.a(m - 2), &pre.b(m - 1), &pre.b(m - 2))
}

/// Solves the fixed-point quadratic of the period and transports it through
/// the preperiod.
pub fn limit_candidates(
    pre: &[LaurentInt],
    period: &[LaurentInt],
    p: &OddPrime,
) -> Result<LimitCandidates> {
    if period.is_empty() {
        return Err(Error::Domain("empty period".into()));
    }
    let t = ConvergentTable::from_quotients(p, period);
    let n = period.len() as isize;
    // B_{N−1}β² + (B_{N−2} − A_{N−1})β − A_{N−2} = 0
    let (a1, a2, b1, b2) = (t.a(n - 1), t.a(n - 2), t.b(n - 1), t.b(n - 2));
    if b1.is_zero() {
        return Err(Error::Domain("degenerate period: B_{N−1} = 0".into()));
    }
    let lin = &b2 - &a1;
    let disc = &lin * &lin + BigRational::from_integer(BigInt::from(4)) * &b1 * &a2;
    let d = disc.numer() * disc.denom();
    if is_perfect_square(&d) {
        return Err(Error::PerfectSquare(d));
    }
    let two_b1 = &b1 * BigInt::from(2);
    let beta = QuadNumber::new(
        -&lin / &two_b1,
        BigRational::new(BigInt::one(), disc.denom().clone()) / &two_b1,
        d.clone(),
    );
    let table = ConvergentTable::from_quotients(p, pre);
    let alpha = transport(&table, &beta)?;
    let min_poly = primitive_poly(&BigRational::one(), &-alpha.trace(), &alpha.norm());
    Ok(LimitCandidates {
        x: alpha.x,
        y: alpha.y,
        d,
        min_poly,
    })
}

/// Minimal polynomial `[a₂, a₁, a₀]` of `[pre, (period)*]`.
pub fn limit_polynomial(
    pre: &[LaurentInt],
    period: &[LaurentInt],
    p: &OddPrime,
) -> Result<[BigInt; 3]> {
    Ok(limit_candidates(pre, period, p)?.min_poly)
}

/// The value of `[pre, (period)*]` as a quadratic irrational, with the root
/// branch chosen so that re-expanding it reproduces `|pre| + 2|period|`
/// quotients.
pub fn periodic_limit(
    pre: &[LaurentInt],
    period: &[LaurentInt],
    p: &OddPrime,
    flavor: Flavor,
) -> Result<QuadIrr> {
    let cand = limit_candidates(pre, period, p)?;
    let sq = padic_square_exists(&cand.d, p).ok_or_else(|| Error::NoPadicSqrt {
        radicand: cand.d.clone(),
        p: p.get(),
    })?;
    let r = u64::try_from(sqrt_mod_p(&sq.unit, p).expect("residue checked")).expect("below p");
    let horizon = pre.len() + 2 * period.len();
    let target: Vec<LaurentInt> = pre.iter().chain(period).chain(period).cloned().collect();
    for branch in [r, p.get() - r] {
        let root = Arc::new(PadicSqrt::new(&cand.d, branch, p)?);
        let alpha = QuadIrr::from_surd(&cand.x, &cand.y, &root)?;
        let e = expand(&alpha, flavor, horizon)?;
        if e.prefix(horizon) == target {
            return Ok(alpha);
        }
    }
    Err(Error::NoMatchingBranch)
}
