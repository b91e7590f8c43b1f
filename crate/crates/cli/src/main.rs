mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Packing and covering coloured matroids with transversal bases.
#[derive(Parser, Debug, Clone)]
#[command(name = "rota", version, about)]
pub struct Cli {
    /// Re-verify postconditions of every operation (slow).
    #[arg(long, global = true)]
    pub audit: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Write a seeded random instance.
    Generate(GenerateArgs),
    /// Check a solution file against an instance.
    Verify(VerifyArgs),
    /// Cover the ground set with transversal bases.
    Cover(CoverArgs),
    /// Pack disjoint transversal bases.
    Pack(PackArgs),
    /// Compute the k-deadlock of a subset.
    Deadlock(DeadlockArgs),
    /// Check the reservoir properties for a sampled R.
    Reservoir(ReservoirArgs),
    /// Exhaustive reference solvers for small instances.
    Bf(BfArgs),
    /// Run a manifest of commands in parallel, one per line.
    Batch(BatchArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Linear,
    Graphic,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the JSON report here (`-` for standard output).
    #[arg(long)]
    pub json: Option<String>,
    /// Write trace events as JSON lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "linear")]
    pub kind: Kind,
    #[arg(short, long)]
    pub n: usize,
    /// Field size for linear instances.
    #[arg(short, long, default_value_t = 5)]
    pub p: u32,
    /// Vertex count for graphic instances (must be n + 1).
    #[arg(short, long)]
    pub v: Option<usize>,
    #[arg(long, env = "ROTA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(short, long)]
    pub instance: PathBuf,
    #[arg(short, long)]
    pub solution: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct CoverArgs {
    #[arg(short, long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// Defaults to ε/3.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Cap on descent and balancing steps.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 4)]
    pub ell: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    /// Largest rank for the exhaustive minimum-cover check.
    #[arg(long, default_value_t = 3)]
    pub exact_max_n: usize,
    #[arg(long, env = "ROTA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct PackArgs {
    #[arg(short, long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.3)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, env = "ROTA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Defaults to ε³/20.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Reservoir-cost constant; defaults to 10⁷/ε⁵.
    #[arg(long = "L")]
    pub big_l: Option<f64>,
    /// Cascade depth cap; defaults to min(⌈(L/8)·ln(n²/s)⌉ + 2, 3n).
    #[arg(long)]
    pub rmax: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub seeds: usize,
    #[arg(long)]
    pub budget_ms: Option<u64>,
    #[arg(long, default_value_t = 4)]
    pub ell: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Switch to the exhaustive packing for n ≤ 4 when short of n bases.
    #[arg(long)]
    pub exact_fallback: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct DeadlockArgs {
    #[arg(short, long)]
    pub instance: PathBuf,
    #[arg(short, long)]
    pub k: usize,
    /// Comma-separated element ids; the whole ground set when absent.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<u64>>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct ReservoirArgs {
    #[arg(short, long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    /// ε′ for the rank property; defaults to ε/2 with ε = 0.25.
    #[arg(long, default_value_t = 0.125)]
    pub eps_prime: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, env = "ROTA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfProblem {
    Deadlock,
    Pack,
    Cover,
    Rainbow,
}

#[derive(Args, Debug, Clone)]
pub struct BfArgs {
    #[arg(value_enum)]
    pub problem: BfProblem,
    #[arg(short, long)]
    pub instance: PathBuf,
    /// Deadlock parameter, or half the part count for `rainbow`.
    #[arg(short, long, default_value_t = 1)]
    pub k: usize,
    /// Part count for `rainbow`; defaults to 2k.
    #[arg(short, long)]
    pub m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<u64>>,
    #[arg(long)]
    pub time_cap_ms: Option<u64>,
    /// Ignore the size caps.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct BatchArgs {
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.audit {
        rota_core::audit::set_enabled(true);
    }
    ExitCode::from(run::dispatch(&cli))
}
