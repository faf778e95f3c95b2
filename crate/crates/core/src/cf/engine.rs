use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::{format_quotients, parse_quotients, LaurentInt};
use super::quad::QuadIrr;
use crate::error::{Error, Result};
use crate::padic::{
    centered_mod, inverse_mod_prime_power, split_p, vp_rational, OddPrime, Valuation,
};

/// Default step limit for expansions.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Which digit set the s-function rounds into.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Centred digits in `(−p/2, p/2)`.
    #[default]
    Browkin,
    /// Least digits in `[0, p)`.
    Ruban,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Browkin => "browkin",
            Flavor::Ruban => "ruban",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "browkin" | "bcf" => Ok(Flavor::Browkin),
            "ruban" | "rcf" => Ok(Flavor::Ruban),
            _ => Err(Error::Parse(format!("unknown flavor {s:?}"))),
        }
    }
}

impl Flavor {
    fn reduce(self, x: &BigInt, modulus: &BigInt) -> BigInt {
        match self {
            Flavor::Browkin => centered_mod(x, modulus),
            Flavor::Ruban => x.mod_floor(modulus),
        }
    }

    pub fn admits(self, q: &LaurentInt) -> bool {
        match self {
            Flavor::Browkin => q.in_browkin_range(),
            Flavor::Ruban => q.in_ruban_range(),
        }
    }
}

// The digit numerator r with s(α) = r/p^k, or 0 when |α|_p < 1.
fn digit_numerator(alpha: &QuadIrr, flavor: Flavor) -> Result<BigInt> {
    if alpha.k() < 0 {
        return Ok(BigInt::zero());
    }
    let p = alpha.prime();
    let prec = alpha.k() as u64 + 1;
    let m = p.pow(prec);
    let inv = inverse_mod_prime_power(alpha.c(), p, prec)?;
    let t = (alpha.b() + alpha.root().digits(prec)?) * inv;
    Ok(flavor.reduce(&t, &m))
}

/// Browkin's s-function: the element of `Z[1/p] ∩ (−p/2, p/2)` within
/// p-adic distance `< 1` of `α`.
pub fn s_browkin(alpha: &QuadIrr) -> Result<LaurentInt> {
    s_quad(alpha, Flavor::Browkin)
}

/// Ruban's s-function, with digits in `[0, p)`.
pub fn s_ruban(alpha: &QuadIrr) -> Result<LaurentInt> {
    s_quad(alpha, Flavor::Ruban)
}

pub fn s_quad(alpha: &QuadIrr, flavor: Flavor) -> Result<LaurentInt> {
    let r = digit_numerator(alpha, flavor)?;
    Ok(LaurentInt::new(r, alpha.k().max(0), alpha.prime()))
}

/// The s-function on a rational number.
pub fn s_rational(x: &BigRational, p: &OddPrime, flavor: Flavor) -> Result<LaurentInt> {
    let k = match vp_rational(x, p) {
        Valuation::Infinite => return Ok(LaurentInt::zero(p)),
        Valuation::Finite(v) if v > 0 => return Ok(LaurentInt::zero(p)),
        Valuation::Finite(v) => (-v) as u64,
    };
    // p^k x = n/d with p ∤ d
    let (_, d) = split_p(x.denom(), p);
    let n = x.numer();
    let prec = k + 1;
    let inv = inverse_mod_prime_power(&d, p, prec)?;
    let r = flavor.reduce(&(n * inv), &p.pow(prec));
    Ok(LaurentInt::new(r, k as i64, p))
}

/// One step of the algorithm: `a = s(α)` and `α' = 1/(α − a)`.
///
/// With `r = p^k a`, the next state is `b' = rc − b`, and
/// `(Δ − b'²)/c = p^j c'` with `p ∤ c'` gives `k' = j − k`.
pub fn step(alpha: &QuadIrr, flavor: Flavor) -> Result<(LaurentInt, QuadIrr)> {
    let r = digit_numerator(alpha, flavor)?;
    let a = LaurentInt::new(r.clone(), alpha.k().max(0), alpha.prime());
    let b_next = &r * alpha.c() - alpha.b();
    let n = (alpha.delta() - &b_next * &b_next) / alpha.c();
    if n.is_zero() {
        return Err(Error::RationalState { step: 0 });
    }
    let (j, c_next) = split_p(&n, alpha.prime());
    let next =
        QuadIrr::from_parts_unchecked(alpha.root().clone(), b_next, c_next, j as i64 - alpha.k());
    Ok((a, next))
}

/// Steps through the complete quotients `α_0, α_1, …` of a quadratic irrational.
pub struct Stepper {
    state: QuadIrr,
    flavor: Flavor,
    index: usize,
}

impl Stepper {
    pub fn new(alpha: QuadIrr, flavor: Flavor) -> Self {
        Stepper {
            state: alpha,
            flavor,
            index: 0,
        }
    }

    /// The current complete quotient `α_n`.
    pub fn state(&self) -> &QuadIrr {
        &self.state
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Emits `a_n` and advances to `α_{n+1}`.
    pub fn advance(&mut self) -> Result<LaurentInt> {
        let (a, next) = step(&self.state, self.flavor).map_err(|e| match e {
            Error::RationalState { .. } => Error::RationalState { step: self.index },
            other => other,
        })?;
        self.state = next;
        self.index += 1;
        Ok(a)
    }
}

/// Termination status of an expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Status {
    Finite,
    Periodic,
    /// No repetition within the step limit.
    Open {
        steps: usize,
    },
}

/// A computed continued fraction.
///
/// For `Open` status the computed prefix is stored in `preperiod`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub p: u64,
    pub preperiod: Vec<LaurentInt>,
    pub period: Option<Vec<LaurentInt>>,
    pub status: Status,
    /// Denominator exponents `k_n` of the computed quotients.
    pub ks: Vec<i64>,
}

impl Expansion {
    fn new(
        p: &OddPrime,
        pre: Vec<LaurentInt>,
        period: Option<Vec<LaurentInt>>,
        status: Status,
    ) -> Self {
        let ks = pre
            .iter()
            .chain(period.iter().flatten())
            .map(|q| q.exp().max(0))
            .collect();
        Expansion {
            p: p.get(),
            preperiod: pre,
            period,
            status,
            ks,
        }
    }

    pub fn finite(p: &OddPrime, quotients: Vec<LaurentInt>) -> Self {
        Self::new(p, quotients, None, Status::Finite)
    }

    pub fn periodic(p: &OddPrime, pre: Vec<LaurentInt>, period: Vec<LaurentInt>) -> Self {
        Self::new(p, pre, Some(period), Status::Periodic)
    }

    pub fn is_periodic(&self) -> bool {
        self.status == Status::Periodic
    }

    pub fn period_len(&self) -> Option<usize> {
        self.period.as_ref().map(Vec::len)
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.is_periodic() && self.preperiod.is_empty()
    }

    /// The `i`-th quotient, unrolling the period; `None` past a finite or
    /// open prefix.
    pub fn quotient(&self, i: usize) -> Option<&LaurentInt> {
        if i < self.preperiod.len() {
            return self.preperiod.get(i);
        }
        let period = self.period.as_ref()?;
        period.get((i - self.preperiod.len()) % period.len())
    }

    /// The first `n` quotients (fewer if the expansion is shorter).
    pub fn prefix(&self, n: usize) -> Vec<LaurentInt> {
        (0..n).map_while(|i| self.quotient(i).cloned()).collect()
    }

    /// Parses the text form produced by `Display`.
    pub fn parse(s: &str, p: &OddPrime) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expansion must be bracketed: {s:?}")))?;
        let inner = inner.trim();
        if let Some(open) = inner.find('(') {
            let close = inner
                .rfind(")*")
                .ok_or_else(|| Error::Parse(format!("unterminated period group in {s:?}")))?;
            if close < open || !inner[close + 2..].trim().is_empty() {
                return Err(Error::Parse(format!(
                    "period group must come last in {s:?}"
                )));
            }
            let pre = parse_quotients(inner[..open].trim().trim_end_matches(','), p)?;
            let per = parse_quotients(&inner[open + 1..close], p)?;
            if per.is_empty() {
                return Err(Error::Parse("empty period".into()));
            }
            return Ok(Self::periodic(p, pre, per));
        }
        if let Some(rest) = inner.strip_suffix("...") {
            let pre = parse_quotients(rest.trim().trim_end_matches(','), p)?;
            let n = pre.len();
            return Ok(Self::new(p, pre, None, Status::Open { steps: n }));
        }
        Ok(Self::finite(p, parse_quotients(inner, p)?))
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = format_quotients(&self.preperiod);
        match (&self.status, &self.period) {
            (Status::Periodic, Some(per)) if pre.is_empty() => {
                write!(f, "[({})*]", format_quotients(per))
            }
            (Status::Periodic, Some(per)) => write!(f, "[{pre}, ({})*]", format_quotients(per)),
            (Status::Open { .. }, _) if pre.is_empty() => write!(f, "[...]"),
            (Status::Open { .. }, _) => write!(f, "[{pre}, ...]"),
            _ => write!(f, "[{pre}]"),
        }
    }
}

/// Expands a quadratic irrational for at most `max_steps` quotients,
/// detecting periodicity by the first repeated state `(b, c, k)`.
pub fn expand(alpha: &QuadIrr, flavor: Flavor, max_steps: usize) -> Result<Expansion> {
    let p = alpha.prime().clone();
    let mut seen: HashMap<(BigInt, BigInt, i64), usize> = HashMap::new();
    seen.insert(alpha.key(), 0);
    let mut quotients = Vec::new();
    let mut stepper = Stepper::new(alpha.clone(), flavor);
    for i in 0..max_steps {
        quotients.push(stepper.advance()?);
        let key = stepper.state().key();
        if let Some(&j) = seen.get(&key) {
            let period = quotients.split_off(j);
            return Ok(Expansion::periodic(&p, quotients, period));
        }
        seen.insert(key, i + 1);
    }
    Ok(Expansion::new(
        &p,
        quotients,
        None,
        Status::Open { steps: max_steps },
    ))
}

/// Expands a rational number. Browkin expansions of rationals are finite,
/// so running out of steps there is reported as an error; Ruban expansions
/// may also be periodic or open.
pub fn expand_rational(
    q: &BigRational,
    p: &OddPrime,
    flavor: Flavor,
    max_steps: usize,
) -> Result<Expansion> {
    let mut x = q.clone();
    let mut seen: HashMap<BigRational, usize> = HashMap::new();
    let mut quotients = Vec::new();
    for i in 0..max_steps {
        if flavor == Flavor::Ruban {
            if let Some(&j) = seen.get(&x) {
                let period = quotients.split_off(j);
                return Ok(Expansion::periodic(p, quotients, period));
            }
            seen.insert(x.clone(), i);
        }
        let a = s_rational(&x, p, flavor)?;
        let rest = &x - a.to_rational();
        quotients.push(a);
        if rest.is_zero() {
            return Ok(Expansion::finite(p, quotients));
        }
        x = rest.recip();
    }
    match flavor {
        Flavor::Browkin => Err(Error::NonTerminating(max_steps)),
        Flavor::Ruban => Ok(Expansion::new(
            p,
            quotients,
            None,
            Status::Open { steps: max_steps },
        )),
    }
}

/// The value `1/p^n`, a convenience for building quotient lists.
pub fn inv_p_pow(p: &OddPrime, n: i64) -> LaurentInt {
    LaurentInt::new(BigInt::one(), n, p)
}
