use std::fs;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use num_rational::BigRational;
use padicf::cf::{expand, expand_rational, parse_quotients};
use padicf::checks::{run_checks, CheckOptions};
use padicf::constructor::{
    construct, is_nice, nice_search, ConstructOptions, NiceOutcome, Pool, SearchCursor,
    SearchLimits, SearchSpace,
};
use padicf::{OddPrime, QuadIrr, QuadSpec, Status};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{
    Command, ConstructArgs, ExpandArgs, PoolKind, RunConfig, SearchArgs, VerifyArgs,
};

pub const EXIT_OPEN: i32 = 2;
pub const EXIT_NOT_NICE: i32 = 3;

/// What a command produced: JSON rows, their text rendering and an exit code.
pub struct Outcome {
    pub rows: Vec<Value>,
    pub text: String,
    pub code: i32,
    /// Search progress, for the record and the cursor file.
    pub cursor: Option<SearchCursor>,
}

impl Outcome {
    fn new(rows: Vec<Value>, text: String, code: i32) -> Self {
        Outcome {
            rows,
            text,
            code,
            cursor: None,
        }
    }
}

/// Failures that map to a dedicated exit code rather than 1.
#[derive(Debug)]
pub struct NotNice(pub String);

impl std::fmt::Display for NotNice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NotNice {}

fn prime(cfg: &RunConfig) -> anyhow::Result<OddPrime> {
    let p = cfg.p.ok_or_else(|| anyhow!("--p is required"))?;
    Ok(OddPrime::new(p)?)
}

pub fn execute(
    cmd: &Command,
    cfg: &RunConfig,
    start_override: Option<u128>,
) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Expand(a) => cmd_expand(a, cfg),
        Command::Construct(a) => cmd_construct(a, cfg),
        Command::Verify(a) => cmd_verify(a, cfg),
        Command::Search(a) => cmd_search(a, cfg, start_override),
        Command::Replay(_) => bail!("replay cannot be nested"),
    }
}

fn cmd_expand(a: &ExpandArgs, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = prime(cfg)?;
    let (input, e) = match (&a.quad, &a.rational) {
        (Some(q), _) => {
            let spec = QuadSpec::from_str(q)?;
            let alpha = QuadIrr::normalize(&spec, &p, cfg.precision_cap)?;
            (
                json!({ "quad": spec }),
                expand(&alpha, cfg.flavor, cfg.max_steps)?,
            )
        }
        (None, Some(r)) => {
            let x = BigRational::from_str(&r.replace(' ', ""))
                .map_err(|_| anyhow!("bad rational {r:?}"))?;
            (
                json!({ "rational": x.to_string() }),
                expand_rational(&x, &p, cfg.flavor, cfg.max_steps)?,
            )
        }
        (None, None) => bail!("one of --quad or --rational is required"),
    };
    let code = if matches!(e.status, Status::Open { .. }) {
        EXIT_OPEN
    } else {
        0
    };
    let status = match &e.status {
        Status::Finite => "finite".to_string(),
        Status::Periodic => format!(
            "periodic, preperiod {}, period {}",
            e.preperiod.len(),
            e.period_len().unwrap_or(0)
        ),
        Status::Open { steps } => format!("open after {steps} steps"),
    };
    let text = format!("{e}\n{status}\n");
    let row = json!({
        "p": p.get(),
        "flavor": cfg.flavor,
        "input": input,
        "text": e.to_string(),
        "expansion": e,
    });
    Ok(Outcome::new(vec![row], text, code))
}

/// `N` or an inclusive `A..B`.
pub fn parse_h_range(s: &str) -> anyhow::Result<Vec<u64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .with_context(|| format!("bad range start in {s:?}"))?;
        let b: u64 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .with_context(|| format!("bad range end in {s:?}"))?;
        if b < a {
            bail!("empty range {s:?}");
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![s.parse().with_context(|| format!("bad h {s:?}"))?])
    }
}

fn cmd_construct(a: &ConstructArgs, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let p = prime(cfg)?;
    let cf = parse_quotients(&a.cf, &p)?;
    let hs = parse_h_range(&a.h)?;
    let cert = match is_nice(&cf, &p, cfg.dlog_budget)? {
        NiceOutcome::Nice(c) => c,
        NiceOutcome::NotNice { condition, witness } => {
            return Err(NotNice(format!(
                "not nice: condition ({condition}) fails, {witness}"
            ))
            .into())
        }
        NiceOutcome::Indeterminate { reason } => {
            return Err(NotNice(format!("niceness undecided: {reason}")).into())
        }
    };
    let opts = ConstructOptions {
        max_omega: a.max_omega,
        verify: true,
    };
    let run = |h: &u64| construct(&cert, *h, &opts);
    let results: Vec<_> = if cfg.jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()?
            .install(|| hs.par_iter().map(run).collect())
    } else {
        hs.iter().map(run).collect()
    };
    let mut rows = Vec::new();
    let mut text = format!(
        "{:>4}  {:>8}  {:>6}  {:<8}  m\n",
        "h", "omega", "k_t", "verified"
    );
    for (h, r) in hs.iter().zip(results) {
        let r = r?;
        text += &format!(
            "{h:>4}  {:>8}  {:>6}  {:<8}  {}\n",
            r.omega, r.kt, r.verified, r.m
        );
        let mut row = serde_json::to_value(&r)?;
        row["h"] = json!(h);
        rows.push(row);
    }
    Ok(Outcome::new(rows, text, 0))
}

fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let opts = CheckOptions {
        beta_n: (!a.n.is_empty()).then(|| a.n.clone()),
        dlog_budget: cfg.dlog_budget,
        max_omega: a.max_omega,
    };
    let results = run_checks(a.only.as_deref(), &opts)?;
    let failed = results.iter().filter(|r| !r.pass).count();
    let mut text = String::new();
    for r in &results {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        text += &format!("{tag}  {:<9} {}: {}\n", r.group, r.name, r.detail);
    }
    text += &format!("{} checks, {failed} failed\n", results.len());
    let rows = results
        .iter()
        .map(serde_json::to_value)
        .collect::<Result<_, _>>()?;
    Ok(Outcome::new(rows, text, i32::from(failed > 0)))
}

/// Progress saved between search runs; the space description guards against
/// resuming a different search.
#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct CursorFile {
    space: Value,
    cursor: SearchCursor,
}

fn space_key(a: &SearchArgs, p: &OddPrime) -> Value {
    json!({
        "p": p.get(),
        "t": a.t,
        "pool": format!("{:?}", a.pool).to_lowercase(),
        "num_bound": a.num_bound,
        "max_exp": a.max_exp,
    })
}

/// Start index recorded in a cursor file, if it describes this search.
pub fn resume_point(a: &SearchArgs, cfg: &RunConfig) -> anyhow::Result<Option<u128>> {
    let (Some(path), Some(p)) = (&a.cursor, cfg.p) else {
        return Ok(None);
    };
    if !path.exists() {
        return Ok(None);
    }
    let saved: CursorFile = serde_json::from_str(&fs::read_to_string(path)?)
        .with_context(|| format!("reading cursor {}", path.display()))?;
    if saved.space != space_key(a, &OddPrime::new(p)?) {
        bail!("cursor {} belongs to a different search", path.display());
    }
    Ok(Some(saved.cursor.next))
}

pub fn save_cursor(a: &SearchArgs, cfg: &RunConfig, cursor: SearchCursor) -> anyhow::Result<()> {
    if let Some(path) = &a.cursor {
        let file = CursorFile {
            space: space_key(a, &prime(cfg)?),
            cursor,
        };
        fs::write(path, serde_json::to_string(&file)? + "\n")?;
    }
    Ok(())
}

fn cmd_search(a: &SearchArgs, cfg: &RunConfig, start: Option<u128>) -> anyhow::Result<Outcome> {
    let p = prime(cfg)?;
    let pool = match a.pool {
        PoolKind::All => Pool::All {
            num_bound: a.num_bound,
            max_exp: a.max_exp,
        },
        PoolKind::Pos => Pool::Positive {
            num_bound: a.num_bound,
            max_exp: a.max_exp,
        },
    };
    let space = SearchSpace::uniform(&p, a.t, &pool)?;
    let limits = SearchLimits {
        max_candidates: a.limit,
        max_hits: a.max_hits,
        dlog_budget: cfg.dlog_budget,
        jobs: cfg.jobs,
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    let start = start.unwrap_or(a.start);
    let cursor = nice_search(&space, start, &limits, |hit| {
        let c = &hit.certificate;
        text += &format!(
            "{:>8}  [{}]  q={} omega0={}\n",
            hit.index,
            padicf::cf::format_quotients(&c.cf),
            c.q,
            c.omega0
        );
        rows.push(serde_json::to_value(&hit).map_err(|e| padicf::Error::Domain(e.to_string()))?);
        Ok(())
    })?;
    text += &format!(
        "{} certificates from {} of {} candidates; next index {}{}\n",
        cursor.hits,
        cursor.examined,
        space.size(),
        cursor.next,
        if cursor.exhausted { " (exhausted)" } else { "" }
    );
    rows.push(json!({ "cursor": cursor }));
    Ok(Outcome {
        rows,
        text,
        code: 0,
        cursor: Some(cursor),
    })
}
