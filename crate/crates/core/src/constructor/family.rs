use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::{
    expand, limit_polynomial, ConvergentTable, Flavor, LaurentInt, QuadIrr, QuadNumber, QuadSpec,
};
use crate::error::{Error, Result};
use crate::padic::{padic_square_exists, sqrt_mod_p, OddPrime, PadicSqrt};

/// Whether the printed leading quotient is itself a Browkin digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiteralCheck {
    /// The printed quotients are used as is.
    Exact,
    /// The printed preperiod quotient is not a Browkin digit, so the printed
    /// list cannot literally be a Browkin expansion.
    Indeterminate,
}

/// A closed-form family of periodic square roots verified three ways: by
/// re-expansion, by the fixed-point quadratic of the period, and by the
/// dominant eigenvalue of the period matrix.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub variant: u8,
    pub p: u64,
    pub t: u32,
    /// `α` with `branch` the residue of its root that reproduces the expansion.
    pub alpha: QuadSpec,
    /// The quotients as printed.
    pub literal_preperiod: Vec<LaurentInt>,
    pub preperiod: Vec<LaurentInt>,
    pub period: Vec<LaurentInt>,
    pub literal: LiteralCheck,
    /// Branch of `√Δ` whose Browkin expansion equals `[preperiod, (period)*]`.
    pub branch: Option<u64>,
    /// Minimal polynomial of the limit equals that of `α`.
    pub limit_poly: bool,
    /// `x² − tr(M)x + det(M)` of the period matrix, as `[1, −tr, det]`.
    #[serde_as(as = "[DisplayFromStr; 3]")]
    pub char_poly: [BigRational; 3],
    /// The value obtained from the eigenvalue route equals `α` on the
    /// matching branch.
    pub matrix_agrees: bool,
    pub verified: bool,
}

fn q(n: BigInt, e: i64, p: &OddPrime) -> LaurentInt {
    LaurentInt::new(n, e, p)
}

fn quotients(
    variant: u8,
    p: &OddPrime,
    t: u32,
) -> (Vec<LaurentInt>, Vec<LaurentInt>, Vec<LaurentInt>) {
    let pv = BigInt::from(p.get());
    let one = BigInt::one();
    let two = BigInt::from(2);
    let e = t as i64;
    match variant {
        1 => {
            // (p² − 1)/(2p), with p² − 1 even
            let a0 = q((&pv * &pv - 1u32) / 2u32, 1, p);
            let period = vec![
                q(-&two, 1, p),
                q(-&one, e - 1, p),
                q(two.clone(), 1, p),
                q(-&one, 1, p),
            ];
            (vec![a0.clone()], vec![a0], period)
        }
        2 => {
            let pre = vec![
                LaurentInt::from_int(-(&pv - 1u32) / 2u32, p),
                q(two.clone(), 1, p),
            ];
            let u = q(one.clone(), e - 2, p);
            let x = q(&pv - 2u32, 1, p); // 1 − 2/p
            let y = q(-(&pv + 2u32), 1, p); // −1 − 2/p
            let period = vec![-&u, x.clone(), y.clone(), u.clone(), -&x, -&y];
            (pre.clone(), pre, period)
        }
        _ => {
            let num = pv.pow(t - 1);
            let literal = q((&num + 1u32) / 2u32, e - 2, p);
            let actual = q((&num - 1u32) / 2u32, e - 2, p);
            let u = q(one.clone(), e - 2, p);
            let x = q(&pv - 2u32, 1, p);
            let y = q(-(&pv + 2u32), 1, p);
            let period = vec![x.clone(), y.clone(), u.clone(), -&x, -&y, -&u];
            (vec![literal], vec![actual], period)
        }
    }
}

fn alpha_spec(variant: u8, p: &OddPrime, t: u32) -> QuadSpec {
    let pt = p.pow(t as u64);
    match variant {
        // √(1 − p^{t+2})/(2p)
        1 => QuadSpec::new(BigInt::one() - pt * p.pow(2), 0, 2, 1, 1),
        // √(p^t + 1)/2
        2 => QuadSpec::new(pt + 1u32, 0, 2, 0, 1),
        // √(p^t + 1)/(2p^{t−2})
        _ => QuadSpec::new(pt + 1u32, 0, 2, t as i64 - 2, 1),
    }
}

fn check_domain(variant: u8, p: &OddPrime, t: u32) -> Result<()> {
    match variant {
        1 if t >= 2 => Ok(()),
        2 | 3 if p.get() >= 5 && t >= 3 => Ok(()),
        1..=3 => Err(Error::Domain(format!(
            "variant {variant} is not defined for p = {p}, t = {t}"
        ))),
        _ => Err(Error::Domain(format!("unknown variant {variant}"))),
    }
}

/// Period matrix `Π [[a_i, 1], [1, 0]]`.
fn period_matrix(period: &[LaurentInt]) -> [[BigRational; 2]; 2] {
    let mut m = [
        [BigRational::one(), BigRational::zero()],
        [BigRational::zero(), BigRational::one()],
    ];
    for a in period {
        let a = a.to_rational();
        m = [
            [&m[0][0] * &a + &m[0][1], m[0][0].clone()],
            [&m[1][0] * &a + &m[1][1], m[1][0].clone()],
        ];
    }
    m
}

/// `[pre, (period)*]` from the eigenvalue of the period matrix with the
/// smaller p-adic norm: the limit of the period is `(M₁₁ − μ₂)/M₂₁`.
fn matrix_route(
    pre: &[LaurentInt],
    period: &[LaurentInt],
    p: &OddPrime,
) -> Result<(Vec<QuadIrr>, [BigRational; 3])> {
    let m = period_matrix(period);
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let char_poly = [BigRational::one(), -tr.clone(), det.clone()];
    let disc = &tr * &tr - BigRational::from_integer(4.into()) * &det;
    let d = disc.numer() * disc.denom();
    let sq = padic_square_exists(&d, p).ok_or_else(|| Error::NoPadicSqrt {
        radicand: d.clone(),
        p: p.get(),
    })?;
    let r = u64::try_from(sqrt_mod_p(&sq.unit, p).expect("square")).expect("below p");
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let x = &tr * &half;
    let y = BigRational::new(BigInt::one(), disc.denom() * 2);
    let table = ConvergentTable::from_quotients(p, pre);
    let n = pre.len() as isize;
    let mut out = Vec::new();
    for branch in [r, p.get() - r] {
        let root = Arc::new(PadicSqrt::new(&d, branch, p)?);
        let plus = QuadIrr::from_surd(&x, &y, &root)?;
        let minus = QuadIrr::from_surd(&x, &-&y, &root)?;
        let (vp, vm) = (plus.valuation()?, minus.valuation()?);
        if vp == vm {
            return Err(Error::Domain(
                "eigenvalues of the period matrix have equal p-adic norm".into(),
            ));
        }
        let ys = if vp > vm { y.clone() } else { -&y };
        // α₁ = (M₁₁ − μ₂)/M₂₁ with μ₂ = x + ys·√d
        let a1 = QuadNumber::new((&m[0][0] - &x) / &m[1][0], -&ys / &m[1][0], d.clone());
        let a0 = if n == 0 {
            a1
        } else {
            a1.mobius(
                &table.a(n - 1),
                &table.a(n - 2),
                &table.b(n - 1),
                &table.b(n - 2),
            )?
        };
        out.push(QuadIrr::from_surd(&a0.x, &a0.y, &root)?);
    }
    Ok((out, char_poly))
}

/// Builds and verifies one of the three closed-form families.
pub fn family_section6(variant: u8, p: &OddPrime, t: u32) -> Result<FamilyReport> {
    check_domain(variant, p, t)?;
    let (literal_preperiod, preperiod, period) = quotients(variant, p, t);
    let literal = if literal_preperiod.iter().all(|a| a.in_browkin_range()) {
        LiteralCheck::Exact
    } else {
        LiteralCheck::Indeterminate
    };
    let spec = alpha_spec(variant, p, t);
    let horizon = preperiod.len() + 2 * period.len() + 2;
    let mut branch = None;
    let mut matched = None;
    for br in 1..p.get() {
        let s = QuadSpec {
            branch: br,
            ..spec.clone()
        };
        let Ok(alpha) = s.normalize(p) else { continue };
        let e = expand(&alpha, Flavor::Browkin, horizon)?;
        if e.is_periodic() && e.preperiod == preperiod && e.period.as_ref() == Some(&period) {
            branch = Some(br);
            matched = Some(alpha);
            break;
        }
    }
    let target = spec.normalize(p)?.min_poly();
    let limit_poly = limit_polynomial(&preperiod, &period, p)? == target;
    let (candidates, char_poly) = matrix_route(&preperiod, &period, p)?;
    let matrix_agrees = matched
        .as_ref()
        .is_some_and(|a| candidates.iter().all(|c| c.same_value(a)));
    let verified = branch.is_some() && limit_poly && matrix_agrees;
    Ok(FamilyReport {
        variant,
        p: p.get(),
        t,
        alpha: QuadSpec {
            branch: branch.unwrap_or(spec.branch),
            ..spec
        },
        literal_preperiod,
        preperiod,
        period,
        literal,
        branch,
        limit_poly,
        char_poly,
        matrix_agrees,
        verified,
    })
}
