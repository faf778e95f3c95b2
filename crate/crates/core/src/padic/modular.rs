use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factor::{factorize, DEFAULT_RHO_BUDGET};
use super::mod_inverse;
use crate::error::{Error, Result};

/// Maximum baby-step table size used when the caller does not pass one.
pub const DEFAULT_DLOG_BUDGET: u64 = 1 << 22;

/// Moduli below this are handled by plain enumeration.
const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Outcome of a discrete-logarithm query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DlogOutcome {
    /// The least nonnegative exponent.
    Found(BigInt),
    /// The target is not a power of the base.
    NotInSubgroup,
    /// The subgroup is too large for the table budget (or its order could not
    /// be computed).
    BudgetExceeded,
}

pub fn mod_pow(base: &BigInt, exp: &BigInt, m: &BigInt) -> BigInt {
    base.mod_floor(m).modpow(exp, m)
}

fn check_coprime(a: &BigInt, m: &BigInt) -> Result<()> {
    if m <= &BigInt::zero() {
        return Err(Error::Domain(format!("modulus {m} must be positive")));
    }
    if !a.gcd(m).is_one() {
        return Err(Error::NotInvertible {
            a: a.clone(),
            modulus: m.clone(),
        });
    }
    Ok(())
}

// Factorisation of λ(m), assembled from the factorisations of m and q − 1.
fn carmichael_factored(m: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut acc: Vec<(BigInt, u32)> = Vec::new();
    let mut merge = |parts: Vec<(BigInt, u32)>| {
        for (q, e) in parts {
            match acc.iter_mut().find(|(r, _)| *r == q) {
                Some((_, f)) => *f = (*f).max(e),
                None => acc.push((q, e)),
            }
        }
    };
    for (q, e) in factorize(m, DEFAULT_RHO_BUDGET)? {
        if q == BigInt::from(2) {
            let f = match e {
                1 => 0,
                2 => 1,
                _ => e - 2,
            };
            if f > 0 {
                merge(vec![(q, f)]);
            }
        } else {
            let mut parts = factorize(&(&q - 1), DEFAULT_RHO_BUDGET)?;
            if e > 1 {
                parts.push((q, e - 1));
            }
            merge(parts);
        }
    }
    acc.sort();
    Ok(acc)
}

/// Carmichael's function λ(m), the exponent of `(Z/m)^×`.
pub fn carmichael(m: &BigInt) -> Result<BigInt> {
    if m <= &BigInt::zero() {
        return Err(Error::Domain(format!("modulus {m} must be positive")));
    }
    Ok(carmichael_factored(m)?
        .iter()
        .fold(BigInt::one(), |acc, (q, e)| {
            acc * num_traits::pow(q.clone(), *e as usize)
        }))
}

/// Least `s ≥ 1` with `a^s ≡ 1 (mod m)`.
pub fn mult_order(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    check_coprime(a, m)?;
    if m.is_one() {
        return Ok(BigInt::one());
    }
    let lambda = carmichael_factored(m)?;
    let mut order = lambda.iter().fold(BigInt::one(), |acc, (q, e)| {
        acc * num_traits::pow(q.clone(), *e as usize)
    });
    for (q, e) in &lambda {
        for _ in 0..*e {
            let candidate = &order / q;
            if mod_pow(a, &candidate, m).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Least `ω ≥ 0` with `base^ω ≡ target (mod m)`, by enumeration for small
/// moduli and baby-step/giant-step over the order of `base` otherwise.
///
/// `budget` caps the baby-step table size.
pub fn discrete_log(
    base: &BigInt,
    target: &BigInt,
    m: &BigInt,
    budget: u64,
) -> Result<DlogOutcome> {
    check_coprime(base, m)?;
    check_coprime(target, m)?;
    if m.is_one() {
        return Ok(DlogOutcome::Found(BigInt::zero()));
    }
    let base = base.mod_floor(m);
    let target = target.mod_floor(m);
    if target.is_one() {
        return Ok(DlogOutcome::Found(BigInt::zero()));
    }
    if let Some(small) = m.to_u64().filter(|&v| v < BRUTE_FORCE_LIMIT) {
        let (b, t) = (base.to_u64().unwrap(), target.to_u64().unwrap());
        let mut x = 1u64;
        for i in 0..small {
            if x == t {
                return Ok(DlogOutcome::Found(BigInt::from(i)));
            }
            x = x * b % small;
            if x == 1 {
                break;
            }
        }
        return Ok(DlogOutcome::NotInSubgroup);
    }

    let order = match mult_order(&base, m) {
        Ok(o) => o,
        Err(Error::ResourceLimit(_)) => return Ok(DlogOutcome::BudgetExceeded),
        Err(e) => return Err(e),
    };
    let mut steps = order.sqrt();
    if &steps * &steps < order {
        steps += 1;
    }
    let steps = match steps.to_u64() {
        Some(s) if s <= budget => s,
        _ => return Ok(DlogOutcome::BudgetExceeded),
    };

    let mut table: HashMap<BigInt, u64> = HashMap::with_capacity(steps as usize);
    let mut x = BigInt::one();
    for j in 0..steps {
        table.entry(x.clone()).or_insert(j);
        x = (x * &base) % m;
    }
    let giant = mod_inverse(&mod_pow(&base, &BigInt::from(steps), m), m)?;
    let mut gamma = target;
    for i in 0..=steps {
        if let Some(&j) = table.get(&gamma) {
            return Ok(DlogOutcome::Found(BigInt::from(i) * steps + j));
        }
        gamma = (gamma * &giant) % m;
    }
    Ok(DlogOutcome::NotInSubgroup)
}
