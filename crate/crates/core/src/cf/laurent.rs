use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{split_p, OddPrime, Valuation};

/// An element `x̃/p^e` of `Z[1/p]`, kept canonical: `p ∤ x̃`, and `e = 0`
/// when `x̃ = 0`. The exponent may be negative, so multiples of `p` are
/// representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentInt {
    tilde: BigInt,
    exp: i64,
    p: u64,
}

/// Partial quotients are elements of `Z[1/p]`.
pub type PartialQuotient = LaurentInt;

fn pow_u(p: u64, n: i64) -> BigInt {
    debug_assert!(n >= 0);
    num_traits::pow(BigInt::from(p), n as usize)
}

impl LaurentInt {
    /// `numer / p^exp`, brought to canonical form.
    pub fn new(numer: BigInt, exp: i64, p: &OddPrime) -> Self {
        if numer.is_zero() {
            return Self::zero(p);
        }
        let (v, tilde) = split_p(&numer, p);
        LaurentInt {
            tilde,
            exp: exp - v as i64,
            p: p.get(),
        }
    }

    pub fn zero(p: &OddPrime) -> Self {
        LaurentInt {
            tilde: BigInt::zero(),
            exp: 0,
            p: p.get(),
        }
    }

    pub fn from_int(x: BigInt, p: &OddPrime) -> Self {
        Self::new(x, 0, p)
    }

    /// Fails unless the reduced denominator is a power of `p`.
    pub fn from_rational(x: &BigRational, p: &OddPrime) -> Result<Self> {
        let (v, rest) = split_p(x.denom(), p);
        if !rest.abs().is_one() {
            return Err(Error::Domain(format!("{x} is not in Z[1/{p}]")));
        }
        Ok(Self::new(x.numer() * rest, v as i64, p))
    }

    /// The prime-to-p numerator `x̃`.
    pub fn tilde(&self) -> &BigInt {
        &self.tilde
    }

    /// The denominator exponent `e`; for a partial quotient this is `k_n`.
    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.tilde.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(-self.exp)
        }
    }

    /// `(numerator, denominator)` of the value as integers.
    pub fn as_fraction(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (self.tilde.clone(), pow_u(self.p, self.exp))
        } else {
            (&self.tilde * pow_u(self.p, -self.exp), BigInt::one())
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let (n, d) = self.as_fraction();
        BigRational::new_raw(n, d)
    }

    /// The numerator of the value scaled to denominator `p^e` (`e ≥ self.exp`).
    fn scaled(&self, e: i64) -> BigInt {
        &self.tilde * pow_u(self.p, e - self.exp)
    }

    fn prime_obj(&self) -> OddPrime {
        OddPrime::new(self.p).expect("stored prime was validated")
    }

    pub fn signum(&self) -> i8 {
        crate::padic::signum_i8(&self.tilde)
    }

    /// `|x| < p/2`, the Browkin digit set (together with `e ≥ 1` past index 0).
    pub fn in_browkin_range(&self) -> bool {
        let lhs = self.tilde.abs() * 2u32 * pow_u(self.p, (-self.exp).max(0));
        lhs < pow_u(self.p, 1 + self.exp.max(0))
    }

    /// `0 ≤ x < p`, the Ruban digit set.
    pub fn in_ruban_range(&self) -> bool {
        if self.tilde.is_negative() {
            return false;
        }
        let lhs = &self.tilde * pow_u(self.p, (-self.exp).max(0));
        lhs < pow_u(self.p, 1 + self.exp.max(0))
    }

    /// Parses `"n"` or `"n/d"` with `d` a power of `p`.
    pub fn parse(s: &str, p: &OddPrime) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('−', "-");
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.to_string(), d.to_string()),
            None => (s.clone(), "1".to_string()),
        };
        let n =
            BigInt::from_str(&n).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d =
            BigInt::from_str(&d).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Self::from_rational(&BigRational::new(n, d), p).map_err(|e| Error::Parse(e.to_string()))
    }

    fn check_same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing elements of Z[1/p] for different p");
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.as_fraction();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl Serialize for LaurentInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl PartialOrd for LaurentInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_same_prime(other);
        let e = self.exp.max(other.exp);
        self.scaled(e).cmp(&other.scaled(e))
    }
}

impl std::ops::Add for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, other: &LaurentInt) -> LaurentInt {
        self.check_same_prime(other);
        let e = self.exp.max(other.exp);
        LaurentInt::new(self.scaled(e) + other.scaled(e), e, &self.prime_obj())
    }
}

impl std::ops::Sub for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, other: &LaurentInt) -> LaurentInt {
        self + &(-other)
    }
}

impl std::ops::Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, other: &LaurentInt) -> LaurentInt {
        self.check_same_prime(other);
        if self.is_zero() || other.is_zero() {
            return LaurentInt::zero(&self.prime_obj());
        }
        // both numerators are prime to p, so the product is already canonical
        LaurentInt {
            tilde: &self.tilde * &other.tilde,
            exp: self.exp + other.exp,
            p: self.p,
        }
    }
}

impl std::ops::Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt {
            tilde: -&self.tilde,
            exp: self.exp,
            p: self.p,
        }
    }
}

impl std::ops::Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

/// Parses a comma-separated list of quotients.
pub fn parse_quotients(s: &str, p: &OddPrime) -> Result<Vec<LaurentInt>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| LaurentInt::parse(t, p)).collect()
}

/// Joins quotients with `", "`.
pub fn format_quotients(qs: &[LaurentInt]) -> String {
    qs.iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Least common multiple of the denominators of a list of rationals.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = LaurentInt::new(BigInt::from(50), 3, &p(5));
        assert_eq!(x.tilde(), &BigInt::from(2));
        assert_eq!(x.exp(), 1);
        assert_eq!(x.to_string(), "2/5");
        let y = LaurentInt::new(BigInt::from(15), 0, &p(5));
        assert_eq!(y.exp(), -1);
        assert_eq!(y.to_string(), "15");
        assert_eq!(LaurentInt::new(BigInt::zero(), 7, &p(5)).exp(), 0);
    }

    #[test]
    fn parse_and_print() {
        let pr = p(5);
        for s in ["-5208/3125", "6/5", "12/5", "0", "-3", "274/125"] {
            assert_eq!(LaurentInt::parse(s, &pr).unwrap().to_string(), s);
        }
        assert_eq!(
            LaurentInt::parse(" 5 / 25 ", &pr).unwrap().to_string(),
            "1/5"
        );
        assert_eq!(
            LaurentInt::parse("−4/25", &pr).unwrap().to_string(),
            "-4/25"
        );
        assert!(LaurentInt::parse("1/10", &pr).is_err());
        assert!(LaurentInt::parse("1/0", &pr).is_err());
        assert!(LaurentInt::parse("x", &pr).is_err());
        let qs = parse_quotients("[4/5, -11/5,-3/5]", &pr).unwrap();
        assert_eq!(format_quotients(&qs), "4/5, -11/5, -3/5");
    }

    #[test]
    fn arithmetic_matches_rationals() {
        let pr = p(3);
        let vals = ["1/3", "-2/9", "7", "0", "10/3", "-27", "5/81"];
        for a in vals {
            for b in vals {
                let (x, y) = (
                    LaurentInt::parse(a, &pr).unwrap(),
                    LaurentInt::parse(b, &pr).unwrap(),
                );
                let (rx, ry) = (x.to_rational(), y.to_rational());
                assert_eq!((&x + &y).to_rational(), &rx + &ry);
                assert_eq!((&x - &y).to_rational(), &rx - &ry);
                assert_eq!((&x * &y).to_rational(), &rx * &ry);
                assert_eq!(x.cmp(&y), rx.cmp(&ry));
            }
        }
    }

    #[test]
    fn digit_ranges() {
        let pr = p(5);
        let q = |s| LaurentInt::parse(s, &pr).unwrap();
        assert!(q("274/125").in_browkin_range());
        assert!(!q("13/5").in_browkin_range());
        assert!(q("12/5").in_browkin_range());
        assert!(q("-2").in_browkin_range());
        assert!(!q("-3").in_browkin_range());
        assert!(q("16/5").in_ruban_range());
        assert!(!q("-1/5").in_ruban_range());
        assert!(!q("5").in_ruban_range());
    }
}
