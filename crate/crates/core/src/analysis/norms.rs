use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::{expand, Flavor, QuadIrr, Stepper};
use crate::error::{Error, Result};

/// `K = 1 + Σ_{i=−t}^{t}(Δ − i²) = (2t+1)Δ + 1 − t(t+1)(2t+1)/3` with
/// `t = ⌊√Δ⌋`, the number of possible pairs `(b_n, p^{k_n}c_n)` with negative
/// norm plus one.
pub fn k_bound(delta: &BigInt) -> Result<BigInt> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("K bound needs Δ > 0, got {delta}")));
    }
    let t = delta.sqrt();
    let two_t1 = &t * 2u32 + 1u32;
    Ok(&two_t1 * delta + 1u32 - &t * (&t + 1u32) * &two_t1 / 3u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormSign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
}

impl NormSign {
    fn of(x: &BigInt) -> Self {
        if x.is_positive() {
            NormSign::Positive
        } else if x.is_negative() {
            NormSign::Negative
        } else {
            NormSign::Zero
        }
    }
}

/// Outcome of a periodicity criterion over a finite horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WindowVerdict {
    /// No qualifying window within the horizon.
    NotTriggered,
    /// A window starting at `start` was found and the expansion has a period
    /// within the bound.
    Confirmed { start: usize, period_len: usize },
    /// A window was found but no period within the bound.
    Violated { start: usize, detail: String },
}

/// Norm signs of the real images of the complete quotients.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormSignTrace {
    /// `sign(N(ξ_n)) = sign(b_n² − Δ)`.
    pub signs: Vec<NormSign>,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub b_values: Vec<BigInt>,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub c_values: Vec<BigInt>,
    pub k_values: Vec<i64>,
    /// `None` when `Δ < 0`.
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub k_bound: Option<BigInt>,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BSequenceReport {
    pub trace: NormSignTrace,
    /// Multiplicity of each `|b_n|` over the horizon.
    #[serde_as(as = "BTreeMap<DisplayFromStr, _>")]
    pub abs_b_counts: BTreeMap<BigInt, usize>,
    /// Least `n` from which `|b_n| ≤ ⌊√Δ⌋` holds up to the horizon.
    pub bounded_by_sqrt_from: Option<usize>,
    /// All norms negative on `[n₀, n₀ + K]`.
    pub negative_window: WindowVerdict,
    /// Consecutive norms of opposite sign on `[n₀, n₀ + 2K]`.
    pub alternating_window: WindowVerdict,
}

fn find_window(signs: &[NormSign], len: usize, ok: impl Fn(usize) -> bool) -> Option<usize> {
    let mut run = 0;
    for n in 1..signs.len() {
        run = if ok(n) { run + 1 } else { 0 };
        if run == len {
            return Some(n + 1 - len);
        }
    }
    None
}

fn confirm(alpha: &QuadIrr, start: usize, bound: usize) -> WindowVerdict {
    match expand(alpha, Flavor::Browkin, start + bound + 2) {
        Ok(e) => match e.period_len() {
            Some(l) if l <= bound => WindowVerdict::Confirmed {
                start,
                period_len: l,
            },
            Some(l) => WindowVerdict::Violated {
                start,
                detail: format!("period length {l} exceeds {bound}"),
            },
            None => WindowVerdict::Violated {
                start,
                detail: format!("no period within {} steps", start + bound + 2),
            },
        },
        Err(e) => WindowVerdict::Violated {
            start,
            detail: e.to_string(),
        },
    }
}

/// Runs `n` Browkin steps and reports the `b_n` sequence, the norm signs of
/// the complete quotients and the two windowed periodicity criteria.
///
/// Boundedness of `|b_n|` is only observed over the horizon; the statement it
/// mirrors is about infinite subsequences and is not decidable here.
pub fn b_sequence_analysis(alpha: &QuadIrr, n: usize) -> Result<BSequenceReport> {
    if n == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let delta = alpha.delta().clone();
    let mut stepper = Stepper::new(alpha.clone(), Flavor::Browkin);
    let (mut bs, mut cs, mut ks, mut signs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..=n {
        let s = stepper.state();
        signs.push(NormSign::of(&(s.b() * s.b() - &delta)));
        bs.push(s.b().clone());
        cs.push(s.c().clone());
        ks.push(s.k());
        if i < n {
            stepper.advance()?;
        }
    }
    let mut abs_b_counts = BTreeMap::new();
    for b in &bs {
        *abs_b_counts.entry(b.abs()).or_insert(0) += 1;
    }
    let bound = if delta.is_positive() {
        Some(delta.sqrt())
    } else {
        None
    };
    let bounded_by_sqrt_from = bound.as_ref().and_then(|t| {
        let tail = bs.iter().rev().take_while(|b| &b.abs() <= t).count();
        (tail > 0).then(|| bs.len() - tail)
    });
    let kb = k_bound(&delta).ok();
    let (negative_window, alternating_window) =
        match kb.as_ref().and_then(|k| usize::try_from(k).ok()) {
            Some(k) => {
                let neg = find_window(&signs, k + 1, |i| signs[i] == NormSign::Negative)
                    .map_or(WindowVerdict::NotTriggered, |s| confirm(alpha, s, k));
                // pairs (n, n+1) for n in [n₀, n₀ + 2K]
                let alt = find_window(&signs, 2 * k + 2, |i| {
                    signs[i] != NormSign::Zero
                        && signs[i - 1] != NormSign::Zero
                        && signs[i] != signs[i - 1]
                })
                .map_or(WindowVerdict::NotTriggered, |s| confirm(alpha, s, 2 * k));
                (neg, alt)
            }
            None => (WindowVerdict::NotTriggered, WindowVerdict::NotTriggered),
        };
    Ok(BSequenceReport {
        trace: NormSignTrace {
            signs,
            b_values: bs,
            c_values: cs,
            k_values: ks,
            k_bound: kb,
        },
        abs_b_counts,
        bounded_by_sqrt_from,
        negative_window,
        alternating_window,
    })
}

/// `1 + Σ_{i=−t}^{t}(Δ − i²)` by direct summation.
pub fn k_bound_brute(delta: i64) -> Option<BigInt> {
    if delta <= 0 {
        return None;
    }
    let t = (delta as f64).sqrt() as i64;
    let t = (t - 1..=t + 1)
        .filter(|x| x * x <= delta)
        .max()
        .expect("nonempty");
    Some((-t..=t).fold(BigInt::one(), |acc, i| acc + BigInt::from(delta - i * i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::QuadSpec;
    use crate::padic::OddPrime;

    #[test]
    fn k_bound_values() {
        assert_eq!(k_bound(&BigInt::from(19)).unwrap(), BigInt::from(112));
        assert_eq!(k_bound(&BigInt::from(1)).unwrap(), BigInt::from(2));
        assert!(k_bound(&BigInt::from(-5)).is_err());
        assert!(k_bound(&BigInt::from(0)).is_err());
        for d in 1..2000 {
            assert_eq!(
                k_bound(&BigInt::from(d)).unwrap(),
                k_bound_brute(d).unwrap(),
                "Δ = {d}"
            );
        }
    }

    #[test]
    fn signs_follow_b() {
        let p5 = OddPrime::new(5).unwrap();
        let a = QuadSpec::new(19, -13, 6, 1, 2).normalize(&p5).unwrap();
        let r = b_sequence_analysis(&a, 40).unwrap();
        assert_eq!(r.trace.signs.len(), 41);
        for (b, s) in r.trace.b_values.iter().zip(&r.trace.signs) {
            assert_eq!(*s, NormSign::of(&(b * b - a.delta())));
        }
        // periodic, so |b_n| repeats
        assert!(r.abs_b_counts.values().any(|&c| c >= 3));
        let neg = QuadSpec::new(-434, 0, -434, 1, 1).normalize(&p5).unwrap();
        let r = b_sequence_analysis(&neg, 10).unwrap();
        assert!(r.trace.signs.iter().all(|s| *s == NormSign::Positive));
        assert_eq!(r.trace.k_bound, None);
        assert_eq!(r.negative_window, WindowVerdict::NotTriggered);
    }
}
