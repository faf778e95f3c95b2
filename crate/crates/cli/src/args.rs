use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use padicf::cf::DEFAULT_MAX_STEPS;
use padicf::constructor::DEFAULT_MAX_OMEGA;
use padicf::padic::{DEFAULT_DLOG_BUDGET, DEFAULT_PRECISION_CAP};
use padicf::Flavor;

#[derive(Parser, Debug)]
#[command(
    name = "padicf",
    version,
    about = "Browkin and Ruban p-adic continued fractions"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Odd prime.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, default_value = "browkin")]
    pub flavor: Flavor,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Largest p-adic precision a square root may be lifted to.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    pub precision_cap: u64,
    /// Baby-step giant-step table size for discrete logarithms.
    #[arg(long, global = true, default_value_t = DEFAULT_DLOG_BUDGET)]
    pub dlog_budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Append a JSON record of this run to a file.
    #[arg(long, global = true)]
    pub out_file: Option<PathBuf>,
    /// Worker threads for search and construct.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Expand a quadratic irrational or a rational.
    Expand(ExpandArgs),
    /// Complete a nice continued fraction into periodic square roots.
    Construct(ConstructArgs),
    /// Run the reproduction suite.
    #[command(alias = "verify-paper")]
    Verify(VerifyArgs),
    /// Enumerate nice continued fractions.
    Search(SearchArgs),
    /// Re-run recorded commands and compare their outputs.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct ExpandArgs {
    /// `Δ,b,c,k,branch` for (b + √Δ)/(p^k c), with √Δ ≡ branch·p^s (mod p^{s+1}).
    #[arg(long, allow_hyphen_values = true)]
    pub quad: Option<String>,
    /// A rational `x/y`.
    #[arg(long, allow_hyphen_values = true)]
    pub rational: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ConstructArgs {
    /// Comma-separated partial quotients, e.g. "1/3, 1/3".
    #[arg(long, allow_hyphen_values = true)]
    pub cf: String,
    /// `N` or an inclusive range `A..B`.
    #[arg(long, default_value = "0")]
    pub h: String,
    #[arg(long, default_value_t = DEFAULT_MAX_OMEGA)]
    pub max_omega: u64,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Run a single group.
    #[arg(long)]
    pub only: Option<String>,
    /// Period exponents for the 2^n constructions.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_MAX_OMEGA)]
    pub max_omega: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolKind {
    All,
    Pos,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Length of the continued fractions.
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value_t = PoolKind::All)]
    pub pool: PoolKind,
    #[arg(long, default_value_t = 10)]
    pub num_bound: u64,
    #[arg(long, default_value_t = 1)]
    pub max_exp: u32,
    /// First enumeration index.
    #[arg(long, default_value_t = 0)]
    pub start: u128,
    /// Examine at most this many candidates.
    #[arg(long)]
    pub limit: Option<u128>,
    /// Stop after this many certificates.
    #[arg(long)]
    pub max_hits: Option<u128>,
    /// Resume from, and save progress to, this file.
    #[arg(long)]
    pub cursor: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// A JSONL file written with --out-file.
    pub file: PathBuf,
}
