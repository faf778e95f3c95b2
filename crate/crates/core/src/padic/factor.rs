//! Integer factorisation for order computations: trial division, Miller–Rabin
//! and Pollard–Brent rho with an iteration budget.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of rho iterations spent on one composite before giving up.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 21;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first twelve prime bases; deterministic below
/// 3.3·10²⁴ and a strong probable-prime test beyond.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64, budget: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        let mut spent = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigInt, budget: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for c in 1..32u64 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut r = 1u64;
        let mut spent = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..(r - k).min(128) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (2u64..1000).filter(|&q| is_prime_u64(q)).collect())
}

fn split(n: &BigInt, budget: u64) -> Option<BigInt> {
    match n.to_u64() {
        Some(small) => rho_u64(small, budget).map(BigInt::from),
        None => rho_big(n, budget),
    }
}

/// Factorises `|n|` (n ≠ 0) into sorted `(prime, exponent)` pairs.
///
/// Fails with [`Error::ResourceLimit`] when a composite cofactor survives
/// `budget` rho iterations.
pub fn factorize(n: &BigInt, budget: u64) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let mut rest = n.abs();
    let mut primes: Vec<BigInt> = Vec::new();
    for &q in small_primes() {
        let qb = BigInt::from(q);
        while (&rest % &qb).is_zero() {
            rest /= &qb;
            primes.push(qb.clone());
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        if let Some(r) = perfect_power_root(&m) {
            let (root, e) = r;
            for _ in 0..e {
                stack.push(root.clone());
            }
            continue;
        }
        let d = split(&m, budget).ok_or_else(|| {
            Error::ResourceLimit(format!(
                "could not factor {m} within {budget} rho iterations"
            ))
        })?;
        stack.push(&m / &d);
        stack.push(d);
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

// Rho cycles badly on prime powers, so peel them off first.
fn perfect_power_root(m: &BigInt) -> Option<(BigInt, u32)> {
    let bits = m.bits() as u32;
    for e in (2..=bits.max(2)).rev() {
        let r = m.nth_root(e);
        if r > BigInt::one() && num_traits::pow(r.clone(), e as usize) == *m {
            return Some((r, e));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64) -> Vec<(BigInt, u32)> {
        let mut out = Vec::new();
        let mut n = n;
        let mut q = 2;
        while q * q <= n {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            if e > 0 {
                out.push((BigInt::from(q), e));
            }
            q += 1;
        }
        if n > 1 {
            out.push((BigInt::from(n), 1));
        }
        out
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..3000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), trial, "n = {n}");
        }
        assert!(is_probable_prime(&BigInt::from(
            2_305_843_009_213_693_951u64
        )));
        assert!(!is_probable_prime(
            &(BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64))
        ));
    }

    #[test]
    fn factorization_matches_brute_force() {
        for n in [
            1u64,
            2,
            12,
            36,
            124_609,
            124_256,
            4_575_190_268,
            999_983 * 1_000_003,
        ] {
            assert_eq!(
                factorize(&BigInt::from(n), DEFAULT_RHO_BUDGET).unwrap(),
                brute(n)
            );
        }
        let u = BigInt::from(152_588_281_901u64);
        let f = factorize(&(&u * &u), DEFAULT_RHO_BUDGET).unwrap();
        let back = f.iter().fold(BigInt::one(), |acc, (q, e)| {
            acc * num_traits::pow(q.clone(), *e as usize)
        });
        assert_eq!(back, &u * &u);
    }

    #[test]
    fn large_semiprime() {
        let a = BigInt::from(1_000_000_007u64);
        let b = BigInt::from(1_000_000_009u64);
        let f = factorize(&(&a * &b), DEFAULT_RHO_BUDGET).unwrap();
        assert_eq!(f, vec![(a, 1), (b, 1)]);
    }
}
