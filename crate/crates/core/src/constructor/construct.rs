use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use super::nice::NiceCertificate;
use crate::cf::{
    expand, limit_polynomial, ConvergentTable, Expansion, Flavor, LaurentInt, QuadSpec,
};
use crate::error::{Error, Result};
use crate::padic::{is_perfect_square, mult_order, padic_square_exists, sqrt_mod_p, OddPrime};

/// Largest `ω` that `construct` will materialise `p^ω` for by default.
pub const DEFAULT_MAX_OMEGA: u64 = 400_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructOptions {
    pub max_omega: u64,
    /// Check the identities exactly and re-expand the limit.
    pub verify: bool,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            max_omega: DEFAULT_MAX_OMEGA,
            verify: true,
        }
    }
}

/// Exact checks performed on a constructed instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionChecks {
    /// `c̃Ã_{t−1} + p^{k_t+k_{t−1}}Ã_{t−2} = (−1)^{t−1} q/B̃_{t−1}`.
    pub eq_a: bool,
    /// `c̃B̃_{t−1} + p^{k_t+k_{t−1}}B̃_{t−2} = (−1)^t bÃ_{t−1}`.
    pub eq_b: bool,
    /// `B̃_{t−1}(B̃_t + p^{k_t+k_{t−1}}B̃_{t−2}) = mÃ_{t−1}(Ã_t + p^{k_t+k_{t−1}}Ã_{t−2})`.
    pub eq_m: bool,
    /// The periodic limit satisfies `p^{2k_0}mX² − 1 = 0`.
    pub limit_poly: bool,
    /// Re-expanding `1/(p^{k_0}√m)` on this branch reproduces the expansion.
    pub reexpanded: bool,
}

impl ConstructionChecks {
    pub fn all(&self) -> bool {
        self.eq_a && self.eq_b && self.eq_m && self.limit_poly && self.reexpanded
    }
}

/// A completed nice sequence `[a_0, (a_1, …, a_{t−1}, a_t, a_{t−1}, …, a_1, 2a_0)*]`
/// converging to `1/(p^{k_0}√m)`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionResult {
    pub p: u64,
    pub k0: i64,
    pub t: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub omega: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub b: BigInt,
    pub kt: i64,
    #[serde_as(as = "DisplayFromStr")]
    pub c_tilde: BigInt,
    pub a_t: LaurentInt,
    #[serde_as(as = "DisplayFromStr")]
    pub m: BigInt,
    pub preperiod: Vec<LaurentInt>,
    pub period: Vec<LaurentInt>,
    pub verified: bool,
    /// Residue of `√m` mod `p` whose expansion matched.
    pub branch: Option<u64>,
    #[serde(skip)]
    pub checks: ConstructionChecks,
}

impl ConstructionResult {
    pub fn expansion(&self) -> Expansion {
        Expansion::periodic(&self.prime(), self.preperiod.clone(), self.period.clone())
    }

    pub fn prime(&self) -> OddPrime {
        OddPrime::new(self.p).expect("validated")
    }

    /// `1/(p^{k_0}√m)` as `Δ,b,c,k,branch` on the matching branch.
    pub fn limit_spec(&self) -> Option<QuadSpec> {
        self.branch
            .map(|br| QuadSpec::new(self.m.clone(), 0, self.m.clone(), self.k0, br))
    }
}

struct Frame {
    t: usize,
    k0: i64,
    kt1: i64,
    big_k: i64,
    at1: BigInt,
    at2: BigInt,
    bt1: BigInt,
    bt2: BigInt,
}

impl Frame {
    fn new(cert: &NiceCertificate, table: &ConvergentTable) -> Self {
        let t = cert.t();
        let ti = t as isize;
        Frame {
            t,
            k0: table.k(0),
            kt1: table.k(t - 1),
            big_k: table.k_sum(ti - 1),
            at1: table.a_tilde(ti - 1).clone(),
            at2: table.a_tilde(ti - 2).clone(),
            bt1: table.b_tilde(ti - 1).clone(),
            bt2: table.b_tilde(ti - 2).clone(),
        }
    }

    fn sign(&self, e: usize) -> BigInt {
        if e.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        }
    }
}

/// `(k_t, c̃)` for a given `ω`, or `None` when `ω` is too small or `c̃` is too
/// large for `2c̃/p^{k_t}` to be a Browkin digit.
fn candidate(f: &Frame, q: &BigInt, omega: u64, p: &OddPrime) -> Result<Option<(i64, BigInt)>> {
    let kt = omega as i64 - f.k0 - 2 * f.big_k;
    if kt <= 0 {
        return Ok(None);
    }
    let shift = p.pow((kt + f.kt1) as u64);
    let num = -(&shift * &f.at2) + f.sign(f.t - 1) * (q / &f.bt1);
    let (c, r) = num.div_rem(&f.at1);
    if !r.is_zero() {
        return Err(Error::Certificate(format!(
            "c̃ is not integral at ω = {omega}"
        )));
    }
    let bound = p.pow(kt as u64 + 1);
    Ok((c.abs() * 4u32 < bound).then_some((kt, c)))
}

/// Instantiates the construction for the `h`-th admissible `ω ∈ ω₀ + sℕ`.
pub fn construct(
    cert: &NiceCertificate,
    h: u64,
    opts: &ConstructOptions,
) -> Result<ConstructionResult> {
    let p = cert.prime();
    super::nice::check_bcf(&cert.cf, &p)?;
    let table = ConvergentTable::from_quotients(&p, &cert.cf);
    let f = Frame::new(cert, &table);
    if f.at1 != cert.a_tilde_last || f.bt1 != cert.b_tilde_last {
        return Err(Error::Certificate(
            "Ã_{t-1} or B̃_{t-1} disagrees with the sequence".into(),
        ));
    }
    let q = &cert.q;
    if !(q % &f.bt1).is_zero() || !((&f.bt1 * &f.bt1) % q).is_zero() {
        return Err(Error::Certificate(format!(
            "{} ∤ {q} or {q} ∤ {}²",
            f.bt1, f.bt1
        )));
    }
    let modulus = &f.at1 * &f.at1;
    let pb = p.as_bigint();
    let omega0 =
        u64::try_from(&cert.omega0).map_err(|_| Error::ResourceLimit("ω₀ too large".into()))?;
    if omega0 > opts.max_omega {
        return Err(Error::ResourceLimit(format!(
            "ω₀ = {omega0} exceeds the cap {}",
            opts.max_omega
        )));
    }
    if crate::padic::mod_pow(pb, &BigInt::from(omega0), &modulus) != q.mod_floor(&modulus) {
        return Err(Error::Certificate(format!(
            "{q} ≢ p^{omega0} mod {modulus}"
        )));
    }
    let s = match &cert.order_s {
        Some(s) => s.clone(),
        None if modulus.is_one() => BigInt::one(),
        None => mult_order(pb, &modulus)?,
    };
    let s = u64::try_from(&s).map_err(|_| {
        Error::ResourceLimit(format!(
            "order {s} of p modulo {modulus} exceeds the ω cap {}",
            opts.max_omega
        ))
    })?;
    // ω must exceed k₀ + 2K_{t−1}; skip straight to the first such ω
    let floor = (f.k0 + 2 * f.big_k) as u64;
    let mut omega = if omega0 > floor {
        omega0
    } else {
        omega0 + (floor - omega0) / s * s + s
    };
    let mut seen = 0;
    let (kt, c_tilde) = loop {
        if omega > opts.max_omega {
            return Err(Error::ResourceLimit(format!(
                "needed ω = {omega} exceeds the cap {} (ω₀ = {omega0}, s = {s})",
                opts.max_omega
            )));
        }
        if let Some(found) = candidate(&f, q, omega, &p)? {
            if seen == h {
                break found;
            }
            seen += 1;
        }
        omega += s;
    };
    let p_omega = p.pow(omega);
    let (b, r) = (&p_omega - q).div_rem(&modulus);
    debug_assert!(r.is_zero());
    let q1 = (&f.bt1 * &f.bt1) / q;
    let m = -(&b * &q1);
    let a_t = LaurentInt::new(&c_tilde * 2u32, kt, &p);
    let a0 = cert.cf[0].clone();
    let inner = &cert.cf[1..];
    let mut period: Vec<LaurentInt> = inner.to_vec();
    period.push(a_t.clone());
    period.extend(inner.iter().rev().cloned());
    period.push(&a0 + &a0);
    if (&m % pb).is_zero() || is_perfect_square(&m) || padic_square_exists(&m, &p).is_none() {
        return Err(Error::Certificate(format!(
            "m = {m} is not a nonsquare p-adic unit square"
        )));
    }
    let mut res = ConstructionResult {
        p: p.get(),
        k0: f.k0,
        t: f.t,
        omega: omega.into(),
        q: q.clone(),
        b,
        kt,
        c_tilde,
        a_t,
        m,
        preperiod: vec![a0],
        period,
        verified: false,
        branch: None,
        checks: ConstructionChecks::default(),
    };
    if opts.verify {
        verify(&mut res, &f, &p)?;
    }
    Ok(res)
}

fn verify(res: &mut ConstructionResult, f: &Frame, p: &OddPrime) -> Result<()> {
    let shift = p.pow((res.kt + f.kt1) as u64);
    let mut full = ConvergentTable::from_quotients(p, &res.preperiod);
    for a in &res.period[..f.t - 1] {
        full.push(a.clone());
    }
    full.push(res.a_t.clone());
    let ti = f.t as isize;
    let (at, bt) = (full.a_tilde(ti), full.b_tilde(ti));
    let c = &res.c_tilde;
    let checks = &mut res.checks;
    checks.eq_a = c * &f.at1 + &shift * &f.at2 == f.sign(f.t - 1) * (&res.q / &f.bt1);
    checks.eq_b = c * &f.bt1 + &shift * &f.bt2 == f.sign(f.t) * &res.b * &f.at1;
    checks.eq_m = &f.bt1 * (bt + &shift * &f.bt2) == &res.m * &f.at1 * (at + &shift * &f.at2);
    let p2k = p.pow(2 * res.k0 as u64) * &res.m;
    let target = if p2k.is_negative() {
        [-p2k, BigInt::zero(), BigInt::one()]
    } else {
        [p2k, BigInt::zero(), -BigInt::one()]
    };
    checks.limit_poly = limit_polynomial(&res.preperiod, &res.period, p)? == target;
    let r = u64::try_from(sqrt_mod_p(&res.m, p).expect("m is a square mod p")).expect("below p");
    let horizon = 2 * (res.period.len() + 2);
    for branch in [r, p.get() - r] {
        let alpha = QuadSpec::new(res.m.clone(), 0, res.m.clone(), res.k0, branch).normalize(p)?;
        let e = expand(&alpha, Flavor::Browkin, horizon)?;
        if e.is_periodic() && e.preperiod == res.preperiod && e.period.as_ref() == Some(&res.period)
        {
            res.branch = Some(branch);
            checks.reexpanded = true;
            break;
        }
    }
    res.verified = res.checks.all();
    Ok(())
}
