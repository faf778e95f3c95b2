//! Exact integer and p-adic primitives.
//!
//! Everything here works on arbitrary-precision integers: valuations,
//! centred residues modulo prime powers, modular inverses, square roots in
//! `Q_p` (seeded by Tonelli–Shanks and lifted by Newton iteration),
//! multiplicative orders and discrete logarithms.

pub mod factor;
mod modular;
mod sqrt;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use modular::{
    carmichael, discrete_log, mod_pow, mult_order, DlogOutcome, DEFAULT_DLOG_BUDGET,
};
pub use sqrt::{
    hensel_lift, padic_square_exists, sqrt_mod_p, HenselRoot, PadicSqrt, PadicSquare,
    DEFAULT_PRECISION_CAP,
};

/// An odd prime, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OddPrime {
    value: u64,
    big: BigInt,
}

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !factor::is_prime_u64(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(OddPrime {
            value: p,
            big: BigInt::from(p),
        })
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn as_bigint(&self) -> &BigInt {
        &self.big
    }

    /// `p^n` for `n ≥ 0`.
    pub fn pow(&self, n: u64) -> BigInt {
        let n = u32::try_from(n).expect("exponent does not fit in u32");
        num_traits::pow(self.big.clone(), n as usize)
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Splits `x ≠ 0` into `(v_p(x), x / p^{v_p(x)})`.
pub fn split_p(x: &BigInt, p: &OddPrime) -> (u64, BigInt) {
    debug_assert!(!x.is_zero());
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(p.as_bigint());
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// `v_p` of an integer.
pub fn vp_int(x: &BigInt, p: &OddPrime) -> Valuation {
    if x.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(split_p(x, p).0 as i64)
    }
}

/// `v_p(num/den)`; the denominator must be nonzero.
pub fn vp(num: &BigInt, den: &BigInt, p: &OddPrime) -> Result<Valuation> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let a = split_p(num, p).0 as i64;
    let b = split_p(den, p).0 as i64;
    Ok(Valuation::Finite(a - b))
}

pub fn vp_rational(x: &BigRational, p: &OddPrime) -> Valuation {
    vp(x.numer(), x.denom(), p).expect("BigRational has a nonzero denominator")
}

/// The representative of `x mod p^n` in `(−p^n/2, p^n/2)`.
pub fn centered_residue(x: &BigInt, p: &OddPrime, n: u64) -> BigInt {
    centered_mod(x, &p.pow(n))
}

/// Centred reduction modulo an odd modulus.
pub fn centered_mod(x: &BigInt, modulus: &BigInt) -> BigInt {
    let r = x.mod_floor(modulus);
    if (&r << 1usize) > *modulus {
        r - modulus
    } else {
        r
    }
}

/// The representative of `x mod p^n` in `[0, p^n)`.
pub fn least_residue(x: &BigInt, p: &OddPrime, n: u64) -> BigInt {
    x.mod_floor(&p.pow(n))
}

/// Inverse of `a` modulo `m ≥ 2`, returned in `[1, m−1]`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if *m < BigInt::from(2) {
        return Err(Error::Domain(format!("modulus {m} must be at least 2")));
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::NotInvertible {
            a: a.clone(),
            modulus: m.clone(),
        });
    }
    Ok(e.x.mod_floor(m))
}

/// Inverse of a p-adic unit modulo `p^n`, by Newton iteration from the
/// inverse modulo `p`. Uses only multiplications, so it stays fast for
/// exponents in the tens of thousands.
pub fn inverse_mod_prime_power(a: &BigInt, p: &OddPrime, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let a_mod_p = a.mod_floor(p.as_bigint());
    if a_mod_p.is_zero() {
        return Err(Error::NotInvertible {
            a: a.clone(),
            modulus: p.pow(n),
        });
    }
    let mut inv = mod_inverse(&a_mod_p, p.as_bigint())?;
    let mut prec = 1u64;
    let two = BigInt::from(2);
    while prec < n {
        prec = (prec * 2).min(n);
        let m = p.pow(prec);
        let a_m = a.mod_floor(&m);
        // y ← y(2 − a y)
        inv = (&inv * (&two - (&a_m * &inv))).mod_floor(&m);
    }
    Ok(inv)
}

/// Exact integer square root test.
pub fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &r * &r == *x
}

/// Compares `|x|` against a rational bound `num/den` (den > 0) exactly.
pub(crate) fn cmp_abs_rational(x: &BigRational, num: i64, den: i64) -> Ordering {
    let bound = BigRational::new(BigInt::from(num), BigInt::from(den));
    x.abs().cmp(&bound)
}

/// Sign of an integer as −1, 0, 1.
pub(crate) fn signum_i8(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
