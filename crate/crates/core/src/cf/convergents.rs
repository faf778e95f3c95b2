use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::LaurentInt;
use crate::error::{Error, Result};
use crate::padic::OddPrime;

/// Convergent numerators and denominators of a finite quotient list,
/// indexed from `−1`.
///
/// With `k_n = max(e_n, 0)` the denominator exponent of `a_n`,
/// `ã_n = p^{k_n}a_n`, `K'_n = k_0 + … + k_n` and `K_n = k_1 + … + k_n`,
/// the table stores `Ã_n = p^{K'_n}A_n` and `B̃_n = p^{K_n}B_n`, which obey
/// `Ã_n = ã_nÃ_{n−1} + p^{k_n+k_{n−1}}Ã_{n−2}` (likewise for `B̃`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentTable {
    p: OddPrime,
    quotients: Vec<LaurentInt>,
    ks: Vec<i64>,
    a_tilde_q: Vec<BigInt>,
    // offset by one: slot n+1 holds index n
    at: Vec<BigInt>,
    bt: Vec<BigInt>,
    kp: Vec<i64>,
    kk: Vec<i64>,
}

impl ConvergentTable {
    pub fn new(p: &OddPrime) -> Self {
        ConvergentTable {
            p: p.clone(),
            quotients: Vec::new(),
            ks: Vec::new(),
            a_tilde_q: Vec::new(),
            at: vec![BigInt::one()],
            bt: vec![BigInt::zero()],
            kp: vec![0],
            kk: vec![0],
        }
    }

    pub fn from_quotients(p: &OddPrime, quotients: &[LaurentInt]) -> Self {
        let mut t = Self::new(p);
        for q in quotients {
            t.push(q.clone());
        }
        t
    }

    /// Appends the next quotient.
    pub fn push(&mut self, q: LaurentInt) {
        let n = self.quotients.len();
        let k = q.exp().max(0);
        let qt = (q.to_rational() * BigRational::from_integer(self.p.pow(k as u64))).to_integer();
        let (at, bt, kp, kk) = if n == 0 {
            (qt.clone(), BigInt::one(), k, 0)
        } else {
            let shift = self.p.pow((k + self.ks[n - 1]) as u64);
            (
                &qt * &self.at[n] + &shift * &self.at[n - 1],
                &qt * &self.bt[n] + &shift * &self.bt[n - 1],
                self.kp[n] + k,
                self.kk[n] + k,
            )
        };
        self.quotients.push(q);
        self.ks.push(k);
        self.a_tilde_q.push(qt);
        self.at.push(at);
        self.bt.push(bt);
        self.kp.push(kp);
        self.kk.push(kk);
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn prime(&self) -> &OddPrime {
        &self.p
    }

    pub fn quotients(&self) -> &[LaurentInt] {
        &self.quotients
    }

    /// `k_n`.
    pub fn k(&self, n: usize) -> i64 {
        self.ks[n]
    }

    /// `ã_n = p^{k_n}a_n`.
    pub fn quotient_tilde(&self, n: usize) -> &BigInt {
        &self.a_tilde_q[n]
    }

    fn slot(n: isize) -> usize {
        assert!(n >= -1, "convergent index below −1");
        (n + 1) as usize
    }

    /// `Ã_n` for `n ≥ −1`.
    pub fn a_tilde(&self, n: isize) -> &BigInt {
        &self.at[Self::slot(n)]
    }

    /// `B̃_n` for `n ≥ −1`.
    pub fn b_tilde(&self, n: isize) -> &BigInt {
        &self.bt[Self::slot(n)]
    }

    /// `K'_n = k_0 + … + k_n` (0 at `n = −1`).
    pub fn k_prime(&self, n: isize) -> i64 {
        self.kp[Self::slot(n)]
    }

    /// `K_n = k_1 + … + k_n` (0 at `n ≤ 0`).
    pub fn k_sum(&self, n: isize) -> i64 {
        self.kk[Self::slot(n)]
    }

    fn unscale(&self, x: &BigInt, e: i64) -> BigRational {
        BigRational::new(x.clone(), self.p.pow(e as u64))
    }

    /// `A_n` for `n ≥ −1`.
    pub fn a(&self, n: isize) -> BigRational {
        self.unscale(self.a_tilde(n), self.k_prime(n))
    }

    /// `B_n` for `n ≥ −1`.
    pub fn b(&self, n: isize) -> BigRational {
        self.unscale(self.b_tilde(n), self.k_sum(n))
    }

    pub fn a_laurent(&self, n: isize) -> LaurentInt {
        LaurentInt::new(self.a_tilde(n).clone(), self.k_prime(n), &self.p)
    }

    pub fn b_laurent(&self, n: isize) -> LaurentInt {
        LaurentInt::new(self.b_tilde(n).clone(), self.k_sum(n), &self.p)
    }

    /// `Q_n = A_n/B_n`.
    pub fn convergent(&self, n: isize) -> Result<BigRational> {
        let b = self.b(n);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.a(n) / b)
    }

    /// `A_nB_{n−1} − B_nA_{n−1}` for `n ≥ 0`.
    pub fn determinant(&self, n: isize) -> BigRational {
        self.a(n) * self.b(n - 1) - self.b(n) * self.a(n - 1)
    }
}

/// `[a_0, …, a_n]` by back-substitution.
pub fn eval_finite(cf: &[LaurentInt]) -> Result<BigRational> {
    let (last, rest) = cf
        .split_last()
        .ok_or_else(|| Error::Domain("empty continued fraction".into()))?;
    let mut x = last.to_rational();
    for a in rest.iter().rev() {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        x = a.to_rational() + x.recip();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::laurent::parse_quotients;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn tilde_rows_examples() {
        let p3 = p(3);
        let t = ConvergentTable::from_quotients(&p3, &parse_quotients("1/3, 1/3", &p3).unwrap());
        assert_eq!(t.a_tilde(1), &BigInt::from(10));
        assert_eq!(t.b_tilde(1), &BigInt::from(1));
        for pv in [3u64, 5, 7] {
            let pr = p(pv);
            let pi = pv as i64;
            let cf = vec![
                LaurentInt::new(1.into(), 1, &pr),
                LaurentInt::new((1 - pi).into(), 1, &pr),
                LaurentInt::new((1 + pi).into(), 1, &pr),
            ];
            let t = ConvergentTable::from_quotients(&pr, &cf);
            assert_eq!(t.b_tilde(2), &BigInt::from(1));
        }
    }

    #[test]
    fn naive_recurrence_and_determinant() {
        let pr = p(5);
        let cf = parse_quotients("6/5, -5208/3125, 12/5, 2/25, -1/5, 0, 3", &pr).unwrap();
        let t = ConvergentTable::from_quotients(&pr, &cf);
        let (mut a2, mut a1) = (BigRational::zero(), BigRational::one());
        let (mut b2, mut b1) = (BigRational::one(), BigRational::zero());
        for (n, q) in cf.iter().enumerate() {
            let q = q.to_rational();
            let a = &q * &a1 + &a2;
            let b = &q * &b1 + &b2;
            assert_eq!(t.a(n as isize), a);
            assert_eq!(t.b(n as isize), b);
            let sign = if n % 2 == 0 { -1 } else { 1 };
            assert_eq!(
                t.determinant(n as isize),
                BigRational::from_integer(BigInt::from(sign))
            );
            (a2, a1, b2, b1) = (a1, a, b1, b);
        }
    }

    #[test]
    fn eval_matches_table() {
        let pr = p(3);
        let cf = parse_quotients("1/3, 1/3", &pr).unwrap();
        assert_eq!(
            eval_finite(&cf).unwrap(),
            BigRational::new(10.into(), 3.into())
        );
        let cf = parse_quotients("4/3, -2/3, -1/3, 2/3", &pr).unwrap();
        let t = ConvergentTable::from_quotients(&pr, &cf);
        assert_eq!(eval_finite(&cf).unwrap(), t.convergent(3).unwrap());
        let bad = parse_quotients("1, 0", &pr).unwrap();
        assert!(matches!(eval_finite(&bad), Err(Error::DivisionByZero)));
        assert!(eval_finite(&[]).is_err());
    }
}
