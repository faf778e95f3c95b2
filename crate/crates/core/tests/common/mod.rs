//! Generators and independent oracles shared by the property and acceptance
//! suites.
#![allow(dead_code)]

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use padicf::analysis::{is_regular, trace_zero_classify};
use padicf::cf::{
    expand, expand_rational, limit_polynomial, periodic_limit, Flavor, LaurentInt, QuadIrr,
    QuadSpec, Status,
};
use padicf::constructor::{construct, is_nice, ConstructOptions, NiceOutcome};
use padicf::padic::{
    padic_square_exists, sqrt_mod_p, vp_rational, OddPrime, Valuation, DEFAULT_DLOG_BUDGET,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

pub fn prime(p: u64) -> OddPrime {
    OddPrime::new(p).unwrap()
}

pub fn arb_prime() -> impl Strategy<Value = OddPrime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(prime)
}

/// A Browkin digit `x̃/p^e` with `1 ≤ e ≤ 3`.
pub fn arb_digit(p: OddPrime) -> impl Strategy<Value = LaurentInt> {
    (1i64..=3, any::<u64>(), any::<bool>()).prop_filter_map("p | x", move |(e, r, neg)| {
        let half = (p.pow(e as u64 + 1) - 1u32) / 2u32;
        let x = BigInt::from(r) % &half + 1u32;
        if (&x % p.as_bigint()).is_zero() {
            return None;
        }
        Some(LaurentInt::new(if neg { -x } else { x }, e, &p))
    })
}

/// `(b + √Δ)/(p^k c)` with small data; about half the draws have `√Δ ∉ Q_p`
/// and are rejected.
pub fn arb_quad() -> impl Strategy<Value = QuadIrr> {
    (
        arb_prime(),
        -60i64..60,
        1i64..30,
        any::<bool>(),
        -60i64..60,
        -2i64..=3,
        any::<bool>(),
    )
        .prop_filter_map("no square root", |(p, b, c, neg_c, r, k, flip)| {
            let c = if neg_c { -c } else { c };
            let delta = BigInt::from(b * b - c * r);
            let sq = padic_square_exists(&delta, &p)?;
            let root = u64::try_from(sqrt_mod_p(&sq.unit, &p)?).ok()?;
            let branch = if flip { p.get() - root } else { root };
            QuadSpec::new(delta, b, c, k, branch).normalize(&p).ok()
        })
}

/// A preperiod (possibly empty) and a period of Browkin digits; the leading
/// quotient may be any digit when there is a preperiod.
pub fn arb_periodic() -> impl Strategy<Value = (OddPrime, Vec<LaurentInt>, Vec<LaurentInt>)> {
    arb_prime().prop_flat_map(|p| {
        (
            Just(p.clone()),
            prop::collection::vec(arb_digit(p.clone()), 0..3),
            prop::collection::vec(arb_digit(p), 1..5),
        )
    })
}

pub fn arb_rational() -> impl Strategy<Value = (OddPrime, BigRational)> {
    (arb_prime(), -1_000_000i64..=1_000_000, 1i64..=1_000_000)
        .prop_map(|(p, x, y)| (p, BigRational::new(x.into(), y.into())))
}

/// `A_n, B_n` for `n = 0..len`, by the three-term recurrence over `Q`.
pub fn convergents(cf: &[LaurentInt]) -> Vec<(BigRational, BigRational)> {
    let (mut a2, mut a1) = (BigRational::zero(), BigRational::one());
    let (mut b2, mut b1) = (BigRational::one(), BigRational::zero());
    let mut out = Vec::with_capacity(cf.len());
    for q in cf {
        let q = q.to_rational();
        let a = &q * &a1 + &a2;
        let b = &q * &b1 + &b2;
        out.push((a.clone(), b.clone()));
        (a2, a1, b2, b1) = (a1, a, b1, b);
    }
    out
}

/// Period matrix `Π [[a, 1], [1, 0]]`.
pub fn period_matrix(period: &[LaurentInt]) -> [[BigRational; 2]; 2] {
    let one = BigRational::one;
    let zero = BigRational::zero;
    let mut m = [[one(), zero()], [zero(), one()]];
    for a in period {
        let a = a.to_rational();
        m = [
            [&m[0][0] * &a + &m[0][1], m[0][0].clone()],
            [&m[1][0] * &a + &m[1][1], m[1][0].clone()],
        ];
    }
    m
}

/// Smallest `d` with `period` a repetition of its first `d` entries.
pub fn primitive_period(period: &[LaurentInt]) -> usize {
    let n = period.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| period[i] == period[i % d]))
        .unwrap()
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// `A_nB_{n−1} − B_nA_{n−1} = (−1)^{n+1}`, also against the library table.
pub fn check_determinant(cf: &[LaurentInt]) -> Result<(), TestCaseError> {
    let conv = convergents(cf);
    let p = prime(cf[0].prime());
    let table = padicf::cf::ConvergentTable::from_quotients(&p, cf);
    let (mut a1, mut b1) = (BigRational::one(), BigRational::zero());
    for (n, (a, b)) in conv.iter().enumerate() {
        let d = a * &b1 - b * &a1;
        let want = if n % 2 == 0 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        if d != want {
            return Err(fail(format!("n = {n}: determinant {d}")));
        }
        if table.a(n as isize) != *a || table.b(n as isize) != *b {
            return Err(fail(format!(
                "n = {n}: table disagrees with the recurrence"
            )));
        }
        (a1, b1) = (a.clone(), b.clone());
    }
    Ok(())
}

/// `v_p(Q_n − α) = 2K_n + k_{n+1} ≥ 2n + 1`, with `α` replaced by a p-adic
/// approximation of higher precision.
pub fn check_valuation_growth(alpha: &QuadIrr, n_max: usize) -> Result<(), TestCaseError> {
    let e = expand(alpha, Flavor::Browkin, n_max + 2).map_err(|e| fail(e.to_string()))?;
    let cf = e.prefix(n_max + 2);
    if cf.len() < n_max + 2 {
        return Ok(());
    }
    let conv = convergents(&cf);
    let ks: Vec<i64> = cf.iter().map(|a| a.exp().max(0)).collect();
    for n in 0..=n_max {
        let big_k: i64 = ks[1..=n].iter().sum();
        let want = 2 * big_k + ks[n + 1];
        let (a, b) = &conv[n];
        let q = a / b;
        let approx = alpha.approx(want + 4).map_err(|e| fail(e.to_string()))?;
        let v = vp_rational(&(&q - approx.to_rational()), &alpha.prime().clone());
        if v != Valuation::Finite(want) {
            return Err(fail(format!(
                "n = {n}: v_p(Q_n − α) = {v}, expected {want} for {alpha}"
            )));
        }
        if want < 2 * n as i64 + 1 {
            return Err(fail(format!("n = {n}: {want} < 2n + 1")));
        }
    }
    Ok(())
}

/// Two periodic expansions agreeing on `a_0, …, a_n` have limits congruent
/// modulo `p^{2n+1}`.
pub fn check_closeness(
    p: &OddPrime,
    shared: &[LaurentInt],
    x: &[LaurentInt],
    y: &[LaurentInt],
) -> Result<(), TestCaseError> {
    let lim = |tail: &[LaurentInt]| periodic_limit(shared, tail, p, Flavor::Browkin);
    let (Ok(a), Ok(b)) = (lim(x), lim(y)) else {
        return Ok(());
    };
    // agreement on a_0..a_n gives valuation at least 2n + 1
    if shared.is_empty() {
        return Ok(());
    }
    let prec = 2 * shared.len() as i64 - 1;
    let d = a.approx(prec).unwrap().to_rational() - b.approx(prec).unwrap().to_rational();
    match vp_rational(&d, p) {
        Valuation::Finite(v) if v < prec => Err(fail(format!("v_p(α − β) = {v} < {prec}"))),
        _ => Ok(()),
    }
}

/// The limit of `[pre, (period)*]` expands back to it, its preperiod is empty
/// exactly when it is regular, and a palindromic period forces norm `−1`.
pub fn check_periodic_roundtrip(
    p: &OddPrime,
    pre: &[LaurentInt],
    period: &[LaurentInt],
) -> Result<(), TestCaseError> {
    let Ok(alpha) = periodic_limit(pre, period, p, Flavor::Browkin) else {
        return Ok(());
    };
    let e = expand(&alpha, Flavor::Browkin, 4 * (pre.len() + period.len()) + 8)
        .map_err(|e| fail(e.to_string()))?;
    if e.status != Status::Periodic {
        return Err(fail(format!(
            "limit of [{pre:?}, ({period:?})*] did not close: {e}"
        )));
    }
    let d = primitive_period(period);
    if e.period_len() != Some(d)
        || e.prefix(pre.len() + 2 * d) != periodic_prefix(pre, period, pre.len() + 2 * d)
    {
        return Err(fail(format!("round trip gave {e}")));
    }
    let reg = is_regular(&alpha).map_err(|e| fail(e.to_string()))?;
    if reg.regular != e.preperiod.is_empty() {
        return Err(fail(format!(
            "regular = {} but preperiod {:?}",
            reg.regular, e.preperiod
        )));
    }
    if pre.is_empty() && period.iter().eq(period.iter().rev()) {
        // fixed point of a symmetric matrix: M₂₁α² + (M₂₂ − M₁₁)α − M₁₂ = 0
        let m = period_matrix(period);
        let norm = -&m[0][1] / &m[1][0];
        if norm != -BigRational::one() || alpha.norm() != -BigRational::one() {
            return Err(fail(format!(
                "palindromic period with norm {norm} / {}",
                alpha.norm()
            )));
        }
    }
    Ok(())
}

pub fn periodic_prefix(pre: &[LaurentInt], period: &[LaurentInt], n: usize) -> Vec<LaurentInt> {
    pre.iter()
        .chain(period.iter().cycle())
        .take(n)
        .cloned()
        .collect()
}

/// Browkin expansions of rationals are finite and evaluate back exactly.
pub fn check_rational(p: &OddPrime, x: &BigRational) -> Result<(), TestCaseError> {
    let e = expand_rational(x, p, Flavor::Browkin, 10_000).map_err(|e| fail(e.to_string()))?;
    if e.status != Status::Finite {
        return Err(fail(format!("{x} over {p}: {e}")));
    }
    let back = padicf::cf::eval_finite(&e.preperiod).map_err(|e| fail(e.to_string()))?;
    if back != *x {
        return Err(fail(format!("{x} over {p} evaluates back to {back}")));
    }
    Ok(())
}

/// `α = p^k√m`, `m` drawn with `√m ∈ Q_p`; periodic ones must have preperiod
/// 1 or 2, as predicted by the classifier. Returns whether `α` was periodic.
pub fn check_trace_zero(p: &OddPrime, m: i64, k: i64, flip: bool) -> Result<bool, TestCaseError> {
    let m = BigInt::from(m);
    let Some(sq) = padic_square_exists(&m, p) else {
        return Ok(false);
    };
    if padicf::padic::is_perfect_square(&m) || m.is_zero() {
        return Ok(false);
    }
    let r = u64::try_from(sqrt_mod_p(&sq.unit, p).unwrap()).unwrap();
    let branch = if flip { p.get() - r } else { r };
    let alpha = QuadSpec::new(m, 0, 1, -k, branch)
        .normalize(p)
        .map_err(|e| fail(e.to_string()))?;
    let e = expand(&alpha, Flavor::Browkin, 200).map_err(|e| fail(e.to_string()))?;
    if !e.is_periodic() {
        return Ok(false);
    }
    let class = trace_zero_classify(&alpha).map_err(|e| fail(e.to_string()))?;
    let len = e.preperiod.len();
    if !(1..=2).contains(&len) || class.preperiod_len() != len {
        return Err(fail(format!(
            "{alpha}: preperiod {len}, classified {class:?}"
        )));
    }
    Ok(true)
}

/// A constructed `1/(p^{k₀}√m)` from `[a_0]`: trace zero with preperiod `[a_0]`.
pub fn check_constructed_trace_zero(
    p: &OddPrime,
    a0: &LaurentInt,
    h: u64,
) -> Result<(), TestCaseError> {
    let cert = match is_nice(std::slice::from_ref(a0), p, DEFAULT_DLOG_BUDGET)
        .map_err(|e| fail(e.to_string()))?
    {
        NiceOutcome::Nice(c) => c,
        _ => return Ok(()),
    };
    let r = construct(&cert, h, &ConstructOptions::default()).map_err(|e| fail(e.to_string()))?;
    let spec = r
        .limit_spec()
        .ok_or_else(|| fail("no branch matched".into()))?;
    let alpha = spec.normalize(p).map_err(|e| fail(e.to_string()))?;
    let class = trace_zero_classify(&alpha).map_err(|e| fail(e.to_string()))?;
    if !r.verified || class.preperiod_len() != 1 || r.preperiod.len() != 1 {
        return Err(fail(format!("{r:?} classified {class:?}")));
    }
    Ok(())
}

/// `√m` for every admissible `|m| ≤ bound` over `p`, both branches: no
/// detected period of length 1 or 3. Returns the number of periodic roots.
pub fn trace_zero_scan(p: &OddPrime, bound: i64, horizon: usize) -> Result<usize, String> {
    let mut periodic = 0;
    for m in -bound..=bound {
        let mb = BigInt::from(m);
        if m == 0 || padicf::padic::is_perfect_square(&mb) {
            continue;
        }
        let Some(sq) = padic_square_exists(&mb, p) else {
            continue;
        };
        let r = u64::try_from(sqrt_mod_p(&sq.unit, p).unwrap()).unwrap();
        for branch in [r, p.get() - r] {
            let alpha = QuadSpec::new(mb.clone(), 0, 1, 0, branch)
                .normalize(p)
                .map_err(|e| e.to_string())?;
            let e = expand(&alpha, Flavor::Browkin, horizon).map_err(|e| e.to_string())?;
            match e.period_len() {
                Some(1) | Some(3) => return Err(format!("√{m} (branch {branch}) has {e}")),
                Some(_) => periodic += 1,
                None => {}
            }
        }
    }
    Ok(periodic)
}

/// Runs `test` on `cases` draws of `strategy` with a fixed seed.
pub fn run_cases<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: cases * 50,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// `x ↦ x̃/p^e` from a `"x/p^e"` literal.
pub fn q(s: &str, p: &OddPrime) -> LaurentInt {
    LaurentInt::parse(s, p).unwrap()
}

pub fn spec(s: &str) -> QuadSpec {
    QuadSpec::from_str(s).unwrap()
}

/// The primitive fixed-point polynomial of the period, for independent
/// comparison with `QuadIrr::min_poly`.
pub fn limit_poly(pre: &[LaurentInt], period: &[LaurentInt], p: &OddPrime) -> [BigInt; 3] {
    limit_polynomial(pre, period, p).unwrap()
}

pub fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    a.gcd(b).gcd(c).abs()
}
