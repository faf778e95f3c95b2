use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cf::{ConvergentTable, LaurentInt};
use crate::error::{Error, Result};
use crate::padic::OddPrime;

/// `β_n^k`, the length-`2^n` sequence with `β_1^k = [1/p^k, 1/p^k]` and
/// `β_{n+1}^k = [b_0, 1/p^k, −b_1, −1/p^k, …, (−1)^i b_i, (−1)^i/p^k, …]`.
pub fn beta(n: u32, k: u32, p: &OddPrime) -> Result<Vec<LaurentInt>> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("β_n^k needs n, k ≥ 1".into()));
    }
    let unit = LaurentInt::new(BigInt::one(), k as i64, p);
    let mut seq = vec![unit.clone(), unit.clone()];
    for _ in 1..n {
        seq = seq
            .iter()
            .enumerate()
            .flat_map(|(i, b)| {
                if i % 2 == 0 {
                    [b.clone(), unit.clone()]
                } else {
                    [-b, -&unit]
                }
            })
            .collect();
    }
    Ok(seq)
}

/// `Ũ(n, p^k)/p^k = (1 + Σ_{j=1}^{n} p^{2^j k})/p^k`, the value of `β_n^k`.
pub fn beta_value(n: u32, k: u32, p: &OddPrime) -> BigRational {
    let x = p.pow(k as u64);
    BigRational::new(u_tilde(n, &x), x)
}

fn pow2(x: &BigInt, e: u32) -> BigInt {
    // x^{2^e}
    (0..e).fold(x.clone(), |acc, _| &acc * &acc)
}

fn u_tilde(n: u32, x: &BigInt) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc + pow2(x, j))
}

fn v_tilde(n: u32, x: &BigInt) -> BigInt {
    let x2 = x * x;
    let e = |j: u32| num_traits::pow(x2.clone(), (1usize << j) - 1);
    (0..n.saturating_sub(1)).fold(e(n - 1), |acc, j| acc - e(j))
}

fn s_tilde(n: u32, x: &BigInt) -> BigInt {
    if n == 1 {
        return BigInt::one();
    }
    // S̃(n, X) = X²S̃(n−1, X²) − 1 − X² − 2Σ_{j=2}^{n−1} X^{2^j}
    let x2 = x * x;
    let tail = (2..n).fold(BigInt::zero(), |acc, j| acc + pow2(x, j));
    &x2 * s_tilde(n - 1, &x2) - 1u32 - &x2 - tail * 2u32
}

/// The closed forms `S, U, V, W` at `X = p^k` next to the convergents of
/// `β_n^k` they are claimed to equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaPolynomials {
    pub n: u32,
    pub k: u32,
    /// `S = A_{2^n−2}`.
    pub s_matches: bool,
    /// `U = A_{2^n−1}`.
    pub u_matches: bool,
    /// `V = B_{2^n−2}`.
    pub v_matches: bool,
    /// `W = B_{2^n−1}`.
    pub w_matches: bool,
    /// `B̃_{2^n−1}(β_n^k) = 1`.
    pub b_tilde_one: bool,
    /// `[β_n^k]` evaluates to `Ũ(n, p^k)/p^k`.
    pub value_matches: bool,
}

impl BetaPolynomials {
    pub fn all(&self) -> bool {
        self.s_matches
            && self.u_matches
            && self.v_matches
            && self.w_matches
            && self.b_tilde_one
            && self.value_matches
    }
}

/// `S̃(n, X)` evaluated at an integer.
pub fn s_tilde_at(n: u32, x: &BigInt) -> BigInt {
    s_tilde(n, x)
}

pub fn beta_polynomials(n: u32, k: u32, p: &OddPrime) -> Result<BetaPolynomials> {
    let seq = beta(n, k, p)?;
    let x = p.pow(k as u64);
    let len = 1isize << n;
    let table = ConvergentTable::from_quotients(p, &seq);
    let frac = |num: BigInt, e: usize| BigRational::new(num, num_traits::pow(x.clone(), e));
    let two_n = 1usize << n;
    let s = frac(s_tilde(n, &x), two_n - 1);
    let u = frac(u_tilde(n, &x), two_n);
    let v = frac(v_tilde(n, &x), two_n - 2);
    let w = frac(BigInt::one(), two_n - 1);
    Ok(BetaPolynomials {
        n,
        k,
        s_matches: table.a(len - 2) == s,
        u_matches: table.a(len - 1) == u,
        v_matches: table.b(len - 2) == v,
        w_matches: table.b(len - 1) == w,
        b_tilde_one: table.b_tilde(len - 1).is_one(),
        value_matches: crate::cf::eval_finite(&seq)? == beta_value(n, k, p),
    })
}

/// A nice sequence of length `2^{n−1}` over `p`, whose construction has
/// period `2^n`: `β_{n−1}^k` for `n ≥ 2` and the least positive single digit
/// `a_0` with `4/p < a_0 < p/4` and denominator `p^k` for `n = 1`.
pub fn power_of_two_seed(n: u32, k: u32, p: &OddPrime) -> Result<Vec<LaurentInt>> {
    match n {
        0 => Err(Error::Domain("period 2^n needs n ≥ 1".into())),
        1 => {
            let lo = BigRational::new(4.into(), BigInt::from(p.get()));
            let hi = BigRational::new(BigInt::from(p.get()), 4.into());
            let mut x = BigInt::one();
            loop {
                let a = LaurentInt::new(x.clone(), k as i64, p);
                let v = a.to_rational();
                if v >= hi {
                    return Err(Error::Domain(format!("no single nice digit over p = {p}")));
                }
                if v > lo && !(&x % p.as_bigint()).is_zero() {
                    return Ok(vec![a]);
                }
                x += 1u32;
            }
        }
        _ => beta(n - 1, k, p),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldVerdict {
    /// Number of identity instances checked.
    pub checked: usize,
    /// First failing identity, as `"(a) at i = 3"`.
    pub failure: Option<String>,
}

impl FoldVerdict {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// The folded sequence `[ã_0/p^{2k}, −ã_2/p^{2k}, …, (−1)^j ã_{2j}/p^{2k}, …]`
/// of `[ã_0/p^k, 1/p^k, ã_2/p^k, −1/p^k, …]`.
pub fn fold(cf: &[LaurentInt], k: u32, p: &OddPrime) -> Result<Vec<LaurentInt>> {
    let unit = LaurentInt::new(BigInt::one(), k as i64, p);
    let mut out = Vec::new();
    for (i, a) in cf.iter().enumerate() {
        let j = i / 2;
        let sign_neg = j % 2 == 1;
        if i % 2 == 1 {
            let expected = if sign_neg { -&unit } else { unit.clone() };
            if *a != expected {
                return Err(Error::Domain(format!("a_{i} = {a}, expected {expected}")));
            }
        } else {
            if a.exp() > k as i64 {
                return Err(Error::Domain(format!(
                    "a_{i} = {a} has denominator above p^{k}"
                )));
            }
            let f = a * &unit;
            out.push(if sign_neg { -f } else { f });
        }
    }
    Ok(out)
}

/// Checks, for every index the sequence reaches,
/// (a) `B_{2i} = (−1)^i(B•_i − B•_{i−1})`, (b) `B_{2i+1} = B•_i/p^k`,
/// (c) `A_{2i+1} = A•_i + B•_i`, (d) `A_{2i} = (−1)^i p^k(A•_i − A•_{i−1} + B•_i − B•_{i−1})`.
pub fn fold_identities(cf: &[LaurentInt], k: u32, p: &OddPrime) -> Result<FoldVerdict> {
    let bullet = fold(cf, k, p)?;
    let t = ConvergentTable::from_quotients(p, cf);
    let tb = ConvergentTable::from_quotients(p, &bullet);
    let pk = BigRational::from_integer(p.pow(k as u64));
    let mut checked = 0;
    for i in 0..bullet.len() as isize {
        let sign = if i % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let db = tb.b(i) - tb.b(i - 1);
        let da = tb.a(i) - tb.a(i - 1);
        let mut check = |name: &str, ok: bool| -> Option<String> {
            checked += 1;
            (!ok).then(|| format!("({name}) at i = {i}"))
        };
        let mut fail = check("a", t.b(2 * i) == &sign * &db);
        fail = fail.or_else(|| check("d", t.a(2 * i) == &sign * &pk * (&da + &db)));
        if ((2 * i + 1) as usize) < cf.len() {
            fail = fail.or_else(|| check("b", t.b(2 * i + 1) == tb.b(i) / &pk));
            fail = fail.or_else(|| check("c", t.a(2 * i + 1) == tb.a(i) + tb.b(i)));
        }
        if fail.is_some() {
            return Ok(FoldVerdict {
                checked,
                failure: fail,
            });
        }
    }
    Ok(FoldVerdict {
        checked,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::eval_finite;

    #[test]
    fn beta_small() {
        let p3 = OddPrime::new(3).unwrap();
        let b1: Vec<String> = beta(1, 2, &p3)
            .unwrap()
            .iter()
            .map(|q| q.to_string())
            .collect();
        assert_eq!(b1, ["1/9", "1/9"]);
        let b2: Vec<String> = beta(2, 1, &p3)
            .unwrap()
            .iter()
            .map(|q| q.to_string())
            .collect();
        assert_eq!(b2, ["1/3", "1/3", "-1/3", "-1/3"]);
        assert_eq!(beta(4, 1, &p3).unwrap().len(), 16);
        assert!(beta(0, 1, &p3).is_err());
    }

    #[test]
    fn s_tilde_base() {
        let x = BigInt::from(7);
        assert_eq!(s_tilde(1, &x), BigInt::one());
        assert_eq!(s_tilde(2, &x), -BigInt::one());
    }

    #[test]
    fn polynomials_and_folding() {
        for pv in [3u64, 5, 7] {
            let p = OddPrime::new(pv).unwrap();
            for k in 1..=3 {
                for n in 1..=5 {
                    let r = beta_polynomials(n, k, &p).unwrap();
                    assert!(r.all(), "p={pv} k={k} n={n}: {r:?}");
                    let seq = beta(n, k, &p).unwrap();
                    assert!(fold_identities(&seq, k, &p).unwrap().holds());
                    if n > 1 {
                        // folding β_n^k gives β_{n−1}^{2k}
                        assert_eq!(fold(&seq, k, &p).unwrap(), beta(n - 1, 2 * k, &p).unwrap());
                    }
                }
            }
            let seq = beta(3, 1, &p).unwrap();
            assert_eq!(eval_finite(&seq).unwrap(), beta_value(3, 1, &p));
        }
    }

    #[test]
    fn seeds() {
        let p5 = OddPrime::new(5).unwrap();
        assert_eq!(power_of_two_seed(1, 1, &p5).unwrap()[0].to_string(), "6/5");
        assert_eq!(
            power_of_two_seed(3, 1, &p5).unwrap(),
            beta(2, 1, &p5).unwrap()
        );
        assert!(power_of_two_seed(1, 1, &OddPrime::new(3).unwrap()).is_err());
    }

    #[test]
    fn folding_rejects_wrong_shape() {
        let p5 = OddPrime::new(5).unwrap();
        let cf = crate::cf::parse_quotients("1/5, 2/5, 1/5", &p5).unwrap();
        assert!(fold_identities(&cf, 1, &p5).is_err());
    }
}
