//! Reproduction suite: the worked examples and identities, as named
//! pass/fail checks grouped by topic.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::analysis::{is_regular, k_bound, ruban_nonperiodic_probe, ruban_periodic_family};
use crate::cf::{
    expand, expand_rational, format_quotients, parse_quotients, Flavor, LaurentInt, QuadSpec,
    Status,
};
use crate::constructor::{
    beta, beta_polynomials, beta_value, construct, family_section6, fold_identities, is_nice,
    nice_search_all, power_of_two_seed, ConstructOptions, LiteralCheck, NiceOutcome, Pool,
    SearchLimits, SearchSpace,
};
use crate::error::{Error, Result};
use crate::padic::{discrete_log, mult_order, DlogOutcome, OddPrime, DEFAULT_DLOG_BUDGET};

pub const GROUPS: [&str; 8] = [
    "engine",
    "construct",
    "dlog",
    "beta",
    "section6",
    "analysis",
    "ruban",
    "search",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub group: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Period exponents for the `2^n` constructions; `None` runs the ones
    /// that fit the default `ω` cap.
    pub beta_n: Option<Vec<u32>>,
    pub dlog_budget: u64,
    pub max_omega: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            beta_n: None,
            dlog_budget: DEFAULT_DLOG_BUDGET,
            max_omega: crate::constructor::DEFAULT_MAX_OMEGA,
        }
    }
}

struct Suite {
    group: &'static str,
    out: Vec<CheckResult>,
}

impl Suite {
    fn new(group: &'static str) -> Self {
        Suite {
            group,
            out: Vec::new(),
        }
    }

    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let (pass, detail) = f().unwrap_or_else(|e| (false, e.to_string()));
        self.out.push(CheckResult {
            group: self.group,
            name: name.into(),
            pass,
            detail,
        });
    }
}

fn prime(p: u64) -> OddPrime {
    OddPrime::new(p).expect("odd prime")
}

fn expect_eq<T: PartialEq + std::fmt::Display>(got: T, want: T) -> (bool, String) {
    let pass = got == want;
    let detail = if pass {
        format!("{got}")
    } else {
        format!("got {got}, expected {want}")
    };
    (pass, detail)
}

fn expansion_of(spec: &str, p: u64, steps: usize) -> Result<crate::cf::Expansion> {
    let alpha = QuadSpec::from_str(spec)?.normalize(&prime(p))?;
    expand(&alpha, Flavor::Browkin, steps)
}

fn engine() -> Vec<CheckResult> {
    let mut s = Suite::new("engine");
    s.run("(-13+√19)/30 over p=5 has the listed period 12", || {
        let e = expansion_of("19,-13,6,1,2", 5, 1000)?;
        Ok(expect_eq(
            e.to_string(),
            "[(4/5, -11/5, -3/5, -4/25, 274/125, -4/25, -3/5, -11/5, 4/5, 1/5, 24/25, 1/5)*]"
                .into(),
        ))
    });
    s.run(
        "(8+√89)/5 over p=5 prints 14 quotients and stays open",
        || {
            let e = expansion_of("89,8,1,1,3", 5, 10_000)?;
            let prefix = format_quotients(&e.prefix(14));
            let open = e.status == Status::Open { steps: 10_000 };
            let want =
                "-9/5, -2/5, -59/25, 2/5, -9/5, 23/25, 3/5, 1/5, 51/25, 8/5, 2/5, -7/5, -12/5, 6/5";
            Ok((
                open && prefix == want,
                format!("{prefix}; status {:?}", e.status),
            ))
        },
    );
    s.run("(1+√37)/6 over p=3 is [(1/3)*]", || {
        Ok(expect_eq(
            expansion_of("37,1,6,0,1", 3, 100)?.to_string(),
            "[(1/3)*]".into(),
        ))
    });
    s.run("10/3 over p=3 is [1/3, 1/3]", || {
        let e = expand_rational(
            &BigRational::new(10.into(), 3.into()),
            &prime(3),
            Flavor::Browkin,
            100,
        )?;
        Ok(expect_eq(e.to_string(), "[1/3, 1/3]".into()))
    });
    s.out
}

fn nice_cert(cf: &str, p: u64, budget: u64) -> Result<crate::constructor::NiceCertificate> {
    let pr = prime(p);
    match is_nice(&parse_quotients(cf, &pr)?, &pr, budget)? {
        NiceOutcome::Nice(c) => Ok(c),
        other => Err(Error::Domain(format!("[{cf}] is not nice: {other:?}"))),
    }
}

fn construction(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut s = Suite::new("construct");
    let copts = ConstructOptions {
        max_omega: opts.max_omega,
        verify: true,
    };
    s.run("[6/5] at ω = 6 gives m = -434", || {
        let r = construct(&nice_cert("6/5", 5, opts.dlog_budget)?, 0, &copts)?;
        let ok = r.omega == 6.into()
            && r.m == BigInt::from(-434)
            && r.kt == 5
            && r.c_tilde == BigInt::from(-2604)
            && r.verified
            && r.expansion().to_string() == "[6/5, (-5208/3125, 12/5)*]";
        Ok((
            ok,
            format!(
                "ω={} m={} k_t={} c̃={} {}",
                r.omega,
                r.m,
                r.kt,
                r.c_tilde,
                r.expansion()
            ),
        ))
    });
    // printed as 1/(10√−1695421) and 1/(5√−105963812934), with the middle
    // quotient printed as c̃/p^{k_t}
    for (h, m, printed) in [
        (1u64, "-6781684", "-40690104/48828125"),
        (2, "-105963812934", "-635782877604/762939453125"),
    ] {
        s.run(format!("[6/5] at h = {h} gives m = {m}"), || {
            let r = construct(&nice_cert("6/5", 5, opts.dlog_budget)?, h, &copts)?;
            let half = LaurentInt::parse(printed, &prime(5))?;
            let doubled = &half * &LaurentInt::from_int(2.into(), &prime(5));
            let ok = r.m == BigInt::from_str(m).expect("literal") && r.a_t == doubled && r.verified;
            Ok((ok, format!("m={} a_t={}", r.m, r.a_t)))
        });
    }
    s.run("[1/3, 1/3] at ω = 20 gives b = 34867844", || {
        let r = construct(&nice_cert("1/3, 1/3", 3, opts.dlog_budget)?, 0, &copts)?;
        let ok = r.omega == 20.into()
            && r.b == BigInt::from(34_867_844)
            && r.kt == 17
            && r.m == BigInt::from(-34_867_844)
            && BigInt::from(9) * &r.m == BigInt::from(66 * 66) * BigInt::from(-72_041)
            && r.verified;
        Ok((
            ok,
            format!("ω={} b={} k_t={} m={}", r.omega, r.b, r.kt, r.m),
        ))
    });
    // printed as 1/(66√X): 9m = 66²X
    for (h, x) in [(1u64, "-251191435104482"), (2, "-875850377587111642857323")] {
        s.run(
            format!("[1/3, 1/3] at h = {h} matches 1/(66√{x})"),
            || {
                let r = construct(&nice_cert("1/3, 1/3", 3, opts.dlog_budget)?, h, &copts)?;
                let ok = BigInt::from(9) * &r.m
                    == BigInt::from(66 * 66) * BigInt::from_str(x).expect("literal")
                    && r.verified;
                Ok((ok, format!("m={}", r.m)))
            },
        );
    }
    s.run("[1/3] over p=3 is not nice", || {
        let pr = prime(3);
        let o = is_nice(&parse_quotients("1/3", &pr)?, &pr, opts.dlog_budget)?;
        Ok((!o.is_nice(), format!("{o:?}")))
    });
    s.out
}

fn dlog(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut s = Suite::new("dlog");
    for (a, m, want) in [(5u64, 36u64, 6u64), (3, 100, 20), (3, 353 * 353, 124_256)] {
        s.run(format!("ord({a} mod {m}) = {want}"), || {
            Ok(expect_eq(mult_order(&a.into(), &m.into())?, want.into()))
        });
    }
    s.run("log_3 110 mod 353² = 31861", || {
        let out = discrete_log(
            &3.into(),
            &110.into(),
            &(353u64 * 353).into(),
            opts.dlog_budget,
        )?;
        Ok((out == DlogOutcome::Found(31_861.into()), format!("{out:?}")))
    });
    s.out
}

fn beta_group(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut s = Suite::new("beta");
    for pv in [3u64, 5, 7] {
        let p = prime(pv);
        for k in 1..=2u32 {
            s.run(
                format!("β_n^{k} over p={pv}, n ≤ 5: value, B̃ = 1, S/U/V/W, folding, nice"),
                || {
                    for n in 1..=5 {
                        let poly = beta_polynomials(n, k, &p)?;
                        let seq = beta(n, k, &p)?;
                        let folded = fold_identities(&seq, k, &p)?;
                        let nice = is_nice(&seq, &p, opts.dlog_budget)?.is_nice();
                        if !(poly.all() && folded.holds() && nice) {
                            return Ok((false, format!("n={n}: {poly:?} {folded:?} nice={nice}")));
                        }
                    }
                    Ok((true, format!("value at n=5: {}", beta_value(5, k, &p))))
                },
            );
        }
    }
    let ns = opts.beta_n.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let p5 = prime(5);
    let copts = ConstructOptions {
        max_omega: opts.max_omega,
        verify: true,
    };
    for n in ns {
        s.run(
            format!(
                "p=5: period 2^{n} from a nice sequence of length 2^{}",
                n.saturating_sub(1)
            ),
            || {
                let seed = power_of_two_seed(n, 1, &p5)?;
                let cert = match is_nice(&seed, &p5, opts.dlog_budget)? {
                    NiceOutcome::Nice(c) => c,
                    other => return Ok((false, format!("{other:?}"))),
                };
                let r = construct(&cert, 0, &copts)?;
                let spec = r.limit_spec().ok_or(Error::NoMatchingBranch)?;
                // p^{k₀}√m = 1/α = [0, a_0, (period)*]
                let inv = QuadSpec::new(
                    spec.delta.clone() * p5.pow(2 * r.k0 as u64),
                    0,
                    1,
                    0,
                    spec.branch,
                );
                let e = expand(
                    &inv.normalize(&p5)?,
                    Flavor::Browkin,
                    4 * r.period.len() + 8,
                )?;
                let len = e.period_len();
                let ok = r.verified && len == Some(1 << n);
                Ok((
                    ok,
                    format!(
                        "ω={} m has {} digits, period {:?}",
                        r.omega,
                        r.m.to_string().len(),
                        len
                    ),
                ))
            },
        );
    }
    s.out
}

fn section6() -> Vec<CheckResult> {
    let mut s = Suite::new("section6");
    for (pv, t) in [(3u64, 2u32), (5, 2), (5, 3), (7, 3)] {
        for v in 1..=3u8 {
            if v > 1 && (pv < 5 || t < 3) {
                continue;
            }
            s.run(format!("variant {v}, p={pv}, t={t}"), || {
                let r = family_section6(v, &prime(pv), t)?;
                let lit = r.literal
                    == if v == 3 {
                        LiteralCheck::Indeterminate
                    } else {
                        LiteralCheck::Exact
                    };
                Ok((
                    r.verified && lit,
                    format!(
                        "branch {}, literal {:?}, [{}, ({})*]",
                        r.branch.map_or("none".into(), |b| b.to_string()),
                        r.literal,
                        format_quotients(&r.preperiod),
                        format_quotients(&r.period)
                    ),
                ))
            });
        }
    }
    s.out
}

fn analysis() -> Vec<CheckResult> {
    let mut s = Suite::new("analysis");
    s.run("(-13+√19)/30 is regular and purely periodic", || {
        let a = QuadSpec::from_str("19,-13,6,1,2")?.normalize(&prime(5))?;
        let r = is_regular(&a)?;
        let e = expand(&a, Flavor::Browkin, 1000)?;
        Ok((r.regular && e.is_purely_periodic(), format!("{r:?}")))
    });
    s.run("K(19) = 112", || {
        Ok(expect_eq(k_bound(&19.into())?, 112.into()))
    });
    s.out
}

fn ruban() -> Vec<CheckResult> {
    let mut s = Suite::new("ruban");
    let p5 = prime(5);
    for h in 1..=3u32 {
        s.run(
            format!("δ/5^{h} has Ruban expansion [1/5^{h}, (2/5^{h})*]"),
            || {
                let e = expand(&ruban_periodic_family(h, &p5)?, Flavor::Ruban, 100)?;
                let u = LaurentInt::new(BigInt::one(), h as i64, &p5);
                let two = LaurentInt::new(2.into(), h as i64, &p5);
                Ok((
                    e.preperiod == vec![u] && e.period == Some(vec![two]),
                    e.to_string(),
                ))
            },
        );
    }
    s.run("5√14 has no Ruban period within 2000 steps", || {
        let r = ruban_nonperiodic_probe(&14.into(), 1, None, 2000, &p5)?;
        let open = matches!(r.status, Status::Open { .. });
        Ok((
            open && r.consistent(),
            format!("{:?}, α₂ negative: {:?}", r.status, r.alpha2_negative),
        ))
    });
    s.out
}

fn search(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut s = Suite::new("search");
    let limits = SearchLimits {
        dlog_budget: opts.dlog_budget,
        ..Default::default()
    };
    s.run("p=5, t=1, |x̃| ≤ 10: exactly ±6/5", || {
        let space = SearchSpace::uniform(
            &prime(5),
            1,
            &Pool::All {
                num_bound: 10,
                max_exp: 1,
            },
        )?;
        let (hits, _) = nice_search_all(&space, &limits)?;
        let got: Vec<String> = hits
            .iter()
            .map(|h| h.certificate.cf[0].to_string())
            .collect();
        Ok((got == ["6/5", "-6/5"], got.join(", ")))
    });
    s.run("p=3, t=1: no nice sequence", || {
        let space = SearchSpace::uniform(
            &prime(3),
            1,
            &Pool::All {
                num_bound: 40,
                max_exp: 3,
            },
        )?;
        let (hits, cur) = nice_search_all(&space, &limits)?;
        Ok((hits.is_empty(), format!("{} candidates", cur.examined)))
    });
    s.run("p=5, t=2, positive pool: nonempty", || {
        let space = SearchSpace::uniform(
            &prime(5),
            2,
            &Pool::Positive {
                num_bound: 12,
                max_exp: 1,
            },
        )?;
        let (hits, _) = nice_search_all(&space, &limits)?;
        Ok((!hits.is_empty(), format!("{} certificates", hits.len())))
    });
    s.out
}

/// Runs every group, or only `only`.
pub fn run_checks(only: Option<&str>, opts: &CheckOptions) -> Result<Vec<CheckResult>> {
    if let Some(g) = only {
        if !GROUPS.contains(&g) {
            return Err(Error::Domain(format!(
                "unknown group {g:?}; expected one of {}",
                GROUPS.join(", ")
            )));
        }
    }
    let mut out = Vec::new();
    for g in GROUPS {
        if only.is_some_and(|o| o != g) {
            continue;
        }
        out.extend(match g {
            "engine" => engine(),
            "construct" => construction(opts),
            "dlog" => dlog(opts),
            "beta" => beta_group(opts),
            "section6" => section6(),
            "analysis" => analysis(),
            "ruban" => ruban(),
            _ => search(opts),
        });
    }
    Ok(out)
}
