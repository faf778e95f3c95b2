use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::{ConvergentTable, Flavor, LaurentInt};
use crate::error::{Error, Result};
use crate::padic::{discrete_log, factor::factorize, DlogOutcome, OddPrime};

/// The three conditions of niceness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NiceCondition {
    /// `|a_0|_p > 1` and `|a_0|_∞ < p/4`.
    A,
    /// `|A_{t−1}/A_{t−2}|_∞ > 4/p`.
    B,
    /// Some `q` with `B̃_{t−1} | q | B̃_{t−1}²` lies in `⟨p⟩ mod Ã_{t−1}²`.
    C,
}

impl fmt::Display for NiceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NiceCondition::A => "a",
            NiceCondition::B => "b",
            NiceCondition::C => "c",
        })
    }
}

/// Evidence that `[a_0, …, a_{t−1}]` is nice.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceCertificate {
    pub p: u64,
    pub cf: Vec<LaurentInt>,
    /// `Ã_{t−1}`.
    #[serde_as(as = "DisplayFromStr")]
    pub a_tilde_last: BigInt,
    /// `B̃_{t−1}`.
    #[serde_as(as = "DisplayFromStr")]
    pub b_tilde_last: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q: BigInt,
    /// `q ≡ p^{ω₀} (mod Ã_{t−1}²)`.
    #[serde_as(as = "DisplayFromStr")]
    pub omega0: BigInt,
    /// Order of `p` modulo `Ã_{t−1}²`, when it was computed.
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub order_s: Option<BigInt>,
    pub cond_a: String,
    pub cond_b: String,
    pub cond_c: String,
}

impl NiceCertificate {
    pub fn t(&self) -> usize {
        self.cf.len()
    }

    pub fn prime(&self) -> OddPrime {
        OddPrime::new(self.p).expect("certificate prime was validated")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NiceOutcome {
    Nice(NiceCertificate),
    NotNice {
        condition: NiceCondition,
        witness: String,
    },
    /// A discrete logarithm ran out of budget before any `q` was certified.
    Indeterminate {
        reason: String,
    },
}

impl NiceOutcome {
    pub fn is_nice(&self) -> bool {
        matches!(self, NiceOutcome::Nice(_))
    }

    pub fn certificate(&self) -> Option<&NiceCertificate> {
        match self {
            NiceOutcome::Nice(c) => Some(c),
            _ => None,
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Checks the shape required of a finite Browkin continued fraction.
pub(crate) fn check_bcf(cf: &[LaurentInt], p: &OddPrime) -> Result<()> {
    if cf.is_empty() {
        return Err(Error::Domain("empty continued fraction".into()));
    }
    for (i, a) in cf.iter().enumerate() {
        if a.prime() != p.get() {
            return Err(Error::Domain(format!(
                "quotient {a} is over a different prime"
            )));
        }
        if !Flavor::Browkin.admits(a) {
            return Err(Error::Domain(format!(
                "quotient {a} lies outside the Browkin digit set"
            )));
        }
        if i > 0 && a.exp() < 1 {
            return Err(Error::Domain(format!(
                "quotient a_{i} = {a} must have |a|_p > 1"
            )));
        }
    }
    Ok(())
}

/// Signed divisors `q` with `d | q | d²`, by increasing `|q|`, positive first.
fn q_candidates(d: &BigInt) -> Result<Vec<BigInt>> {
    let d = d.abs();
    let mut divs = vec![BigInt::one()];
    for (prime, e) in factorize(&d, crate::padic::factor::DEFAULT_RHO_BUDGET)? {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for x in &divs {
            let mut pw = x.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &prime;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs
        .into_iter()
        .flat_map(|e| [&d * &e, -(&d * &e)])
        .collect())
}

/// `[a_0, …, a_{t−1}]` with all quotients positive and `a_{t−1} > 4/p`, in
/// which case condition (b) follows from `A_{t−1}/A_{t−2} ≥ a_{t−1}`.
pub fn positive_shortcut(cf: &[LaurentInt], p: &OddPrime) -> bool {
    let four_over_p = rat(4, p.get() as i64);
    cf.iter().all(|a| a.signum() > 0) && cf.last().is_some_and(|a| a.to_rational() > four_over_p)
}

/// Decides niceness of a finite Browkin continued fraction.
pub fn is_nice(cf: &[LaurentInt], p: &OddPrime, dlog_budget: u64) -> Result<NiceOutcome> {
    check_bcf(cf, p)?;
    let pv = p.get() as i64;
    let t = cf.len() as isize;
    let a0 = &cf[0];
    let a0_abs = a0.to_rational().abs();
    if a0.exp() < 1 || a0_abs >= rat(pv, 4) {
        return Ok(NiceOutcome::NotNice {
            condition: NiceCondition::A,
            witness: format!("a_0 = {a0}"),
        });
    }
    let cond_a = format!("v_p(a_0) = {}, |a_0| < p/4", -a0.exp());
    let table = ConvergentTable::from_quotients(p, cf);
    let (num, den) = (table.a(t - 1), table.a(t - 2));
    if den.is_zero() {
        return Ok(NiceOutcome::NotNice {
            condition: NiceCondition::B,
            witness: "A_{t-2} = 0".into(),
        });
    }
    let ratio = (num / den).abs();
    if ratio <= rat(4, pv) {
        return Ok(NiceOutcome::NotNice {
            condition: NiceCondition::B,
            witness: format!("|A_(t-1)/A_(t-2)| = {ratio}"),
        });
    }
    let cond_b = if positive_shortcut(cf, p) {
        "all quotients positive and a_(t-1) > 4/p".to_string()
    } else {
        format!("|A_(t-1)/A_(t-2)| = {ratio}")
    };
    let at = table.a_tilde(t - 1).clone();
    let bt = table.b_tilde(t - 1).clone();
    let modulus = &at * &at;
    let pb = p.as_bigint().clone();
    let mut budget_hit = None;
    for q in q_candidates(&bt)? {
        if !q.gcd(&modulus).is_one() {
            continue;
        }
        let target = q.mod_floor(&modulus);
        let omega0 = if target == BigInt::one() % &modulus {
            Some(BigInt::zero())
        } else {
            match discrete_log(&pb, &target, &modulus, dlog_budget)? {
                DlogOutcome::Found(w) => Some(w),
                DlogOutcome::NotInSubgroup => None,
                DlogOutcome::BudgetExceeded => {
                    budget_hit.get_or_insert(q.clone());
                    None
                }
            }
        };
        if let Some(omega0) = omega0 {
            let cond_c = format!("q = {q} = p^{omega0} mod {modulus}");
            return Ok(NiceOutcome::Nice(NiceCertificate {
                p: p.get(),
                cf: cf.to_vec(),
                a_tilde_last: at,
                b_tilde_last: bt,
                q,
                omega0,
                order_s: None,
                cond_a,
                cond_b,
                cond_c,
            }));
        }
    }
    Ok(match budget_hit {
        Some(q) => NiceOutcome::Indeterminate {
            reason: format!("discrete log of {q} modulo {modulus} exceeded the budget"),
        },
        None => NiceOutcome::NotNice {
            condition: NiceCondition::C,
            witness: format!("no q with {bt} | q | {bt}^2 lies in <{p}> mod {modulus}"),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::parse_quotients;
    use crate::padic::DEFAULT_DLOG_BUDGET;

    fn nice(s: &str, p: u64) -> NiceOutcome {
        let p = OddPrime::new(p).unwrap();
        is_nice(&parse_quotients(s, &p).unwrap(), &p, DEFAULT_DLOG_BUDGET).unwrap()
    }

    #[test]
    fn known_nice_sequences() {
        for p in [3u64, 5, 7, 11] {
            let c = nice("1/P, 1/P".replace('P', &p.to_string()).as_str(), p);
            assert_eq!(c.certificate().unwrap().q, BigInt::one());
            let cf = format!("1/{p}, {}/{p}, {}/{p}", 1 - p as i64, 1 + p);
            let c = nice(&cf, p);
            assert_eq!(
                c.certificate().unwrap().b_tilde_last,
                BigInt::one(),
                "p = {p}"
            );
            let p2 = p * p;
            let cf = format!(
                "1/{p}, -{}/{p2}, 1/{p}, -2/{p2}, 1/{p}",
                (p * p * p - 1) / 2
            );
            let c = nice(&cf, p);
            assert_eq!(
                c.certificate().unwrap().b_tilde_last,
                -BigInt::one(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn failures_name_the_condition() {
        // |a_0| ≥ p/4
        assert!(matches!(
            nice("4/3", 3),
            NiceOutcome::NotNice {
                condition: NiceCondition::A,
                ..
            }
        ));
        // p = 3, t = 1: |a_0| < 3/4 forces |A_0/A_{-1}| < 4/3
        assert!(matches!(
            nice("1/3", 3),
            NiceOutcome::NotNice {
                condition: NiceCondition::B,
                ..
            }
        ));
        assert!(nice("6/5", 5).is_nice());
        assert!(matches!(
            nice("4/5", 5),
            NiceOutcome::NotNice {
                condition: NiceCondition::B,
                ..
            }
        ));
    }

    #[test]
    fn prime_square_modulus_example() {
        let c = nice("1/3, 110/81", 3);
        let cert = c.certificate().unwrap();
        assert_eq!(cert.q, BigInt::from(110));
        assert_eq!(cert.a_tilde_last, BigInt::from(353));
        assert_eq!(cert.omega0, BigInt::from(31861));
    }

    #[test]
    fn shortcut() {
        let p5 = OddPrime::new(5).unwrap();
        for h in 1..4 {
            let cf = vec![
                LaurentInt::parse("6/5", &p5).unwrap(),
                LaurentInt::new(BigInt::one(), h, &p5),
            ];
            assert!(!positive_shortcut(&cf, &p5));
            assert!(is_nice(&cf, &p5, DEFAULT_DLOG_BUDGET).unwrap().is_nice());
        }
        assert!(positive_shortcut(
            &parse_quotients("6/5, 6/5", &p5).unwrap(),
            &p5
        ));
        assert!(!positive_shortcut(
            &parse_quotients("6/5, -6/5", &p5).unwrap(),
            &p5
        ));
    }

    #[test]
    fn q_order() {
        let qs = q_candidates(&BigInt::from(6)).unwrap();
        let v: Vec<i64> = qs.iter().map(|q| i64::try_from(q).unwrap()).collect();
        assert_eq!(v, vec![6, -6, 12, -12, 18, -18, 36, -36]);
    }
}
