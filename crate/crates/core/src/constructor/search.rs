use std::cmp::Ordering;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nice::{is_nice, NiceCertificate, NiceOutcome};
use crate::cf::{Flavor, LaurentInt};
use crate::error::{Error, Result};
use crate::padic::{cmp_abs_rational, OddPrime};

/// Candidate partial quotients for one position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pool {
    /// Every Browkin digit `x̃/p^e` with `1 ≤ e ≤ max_exp` and `|x̃| ≤ num_bound`.
    All {
        num_bound: u64,
        max_exp: u32,
    },
    /// As `All`, restricted to positive quotients.
    Positive {
        num_bound: u64,
        max_exp: u32,
    },
    Custom(Vec<LaurentInt>),
}

impl Pool {
    /// Quotients by increasing exponent, then `|x̃|`, positive before negative.
    pub fn quotients(&self, p: &OddPrime) -> Vec<LaurentInt> {
        let (bound, max_exp, signs): (u64, u32, &[i64]) = match self {
            Pool::All { num_bound, max_exp } => (*num_bound, *max_exp, &[1, -1]),
            Pool::Positive { num_bound, max_exp } => (*num_bound, *max_exp, &[1]),
            Pool::Custom(v) => return v.clone(),
        };
        let mut out = Vec::new();
        for e in 1..=max_exp as i64 {
            for x in 1..=bound {
                if x % p.get() == 0 {
                    continue;
                }
                for s in signs {
                    let q = LaurentInt::new(BigInt::from(x) * s, e, p);
                    if Flavor::Browkin.admits(&q) {
                        out.push(q);
                    }
                }
            }
        }
        out
    }
}

/// A finite product of per-position pools, enumerated in lexicographic order
/// with position 0 most significant.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    p: OddPrime,
    pools: Vec<Vec<LaurentInt>>,
    size: u128,
}

impl SearchSpace {
    pub fn uniform(p: &OddPrime, t: usize, pool: &Pool) -> Result<Self> {
        let q = pool.quotients(p);
        Self::per_position(p, vec![q; t])
    }

    pub fn per_position(p: &OddPrime, pools: Vec<Vec<LaurentInt>>) -> Result<Self> {
        if pools.is_empty() {
            return Err(Error::Domain("search length must be at least 1".into()));
        }
        let size = pools
            .iter()
            .try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128))
            .ok_or_else(|| Error::Domain("search space exceeds 2^128 candidates".into()))?;
        Ok(SearchSpace {
            p: p.clone(),
            pools,
            size,
        })
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn len(&self) -> usize {
        self.pools.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// The candidate at enumeration index `i < size`.
    pub fn candidate(&self, mut i: u128) -> Vec<LaurentInt> {
        let mut out = vec![LaurentInt::zero(&self.p); self.pools.len()];
        for (slot, pool) in out.iter_mut().zip(&self.pools).rev() {
            let n = pool.len() as u128;
            *slot = pool[(i % n) as usize].clone();
            i /= n;
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    pub index: u128,
    pub certificate: NiceCertificate,
}

/// Where a search stopped; feeding `next` back in resumes it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCursor {
    pub next: u128,
    pub examined: u128,
    pub hits: u128,
    pub indeterminate: u128,
    pub exhausted: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Stop after examining this many candidates.
    pub max_candidates: Option<u128>,
    /// Stop after this many hits.
    pub max_hits: Option<u128>,
    pub dlog_budget: u64,
    /// Worker threads; `1` runs inline.
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_candidates: None,
            max_hits: None,
            dlog_budget: crate::padic::DEFAULT_DLOG_BUDGET,
            jobs: 1,
        }
    }
}

const CHUNK: u128 = 256;

fn classify(space: &SearchSpace, i: u128, budget: u64) -> Result<NiceOutcome> {
    let cf = space.candidate(i);
    is_nice(&cf, &space.p, budget)
}

/// Runs `is_nice` over the space from `start`, emitting certificates in
/// enumeration order regardless of `jobs`.
pub fn nice_search(
    space: &SearchSpace,
    start: u128,
    limits: &SearchLimits,
    mut emit: impl FnMut(SearchHit) -> Result<()>,
) -> Result<SearchCursor> {
    let end = match limits.max_candidates {
        Some(n) => start.saturating_add(n).min(space.size),
        None => space.size,
    };
    let pool = if limits.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(limits.jobs)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let mut cur = SearchCursor {
        next: start.min(end),
        ..Default::default()
    };
    while cur.next < end {
        let hi = (cur.next + CHUNK).min(end);
        let outcomes: Vec<Result<NiceOutcome>> = match &pool {
            Some(tp) => tp.install(|| {
                (cur.next..hi)
                    .into_par_iter()
                    .map(|i| classify(space, i, limits.dlog_budget))
                    .collect()
            }),
            None => (cur.next..hi)
                .map(|i| classify(space, i, limits.dlog_budget))
                .collect(),
        };
        for (i, outcome) in (cur.next..hi).zip(outcomes) {
            cur.examined += 1;
            cur.next = i + 1;
            match outcome? {
                NiceOutcome::Nice(certificate) => {
                    cur.hits += 1;
                    emit(SearchHit {
                        index: i,
                        certificate,
                    })?;
                    if limits.max_hits.is_some_and(|m| cur.hits >= m) {
                        cur.exhausted = cur.next >= space.size;
                        return Ok(cur);
                    }
                }
                NiceOutcome::Indeterminate { .. } => cur.indeterminate += 1,
                NiceOutcome::NotNice { .. } => {}
            }
        }
    }
    cur.exhausted = cur.next >= space.size;
    Ok(cur)
}

/// Collects every certificate of a search.
pub fn nice_search_all(
    space: &SearchSpace,
    limits: &SearchLimits,
) -> Result<(Vec<SearchHit>, SearchCursor)> {
    let mut hits = Vec::new();
    let cur = nice_search(space, 0, limits, |h| {
        hits.push(h);
        Ok(())
    })?;
    Ok((hits, cur))
}

/// Digits `a_0` with `4/p < |a_0| < p/4`; every one of them is nice on its own.
pub fn single_quotient_band(p: &OddPrime, pool: &Pool) -> Vec<LaurentInt> {
    let pv = p.get() as i64;
    pool.quotients(p)
        .into_iter()
        .filter(|a| {
            let x = a.to_rational();
            cmp_abs_rational(&x, 4, pv) == Ordering::Greater
                && cmp_abs_rational(&x, pv, 4) == Ordering::Less
        })
        .collect()
}
