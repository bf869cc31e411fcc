//! `eqas` command-line driver: architecture search, training, baseline
//! construction, post-search reports and genome inspection.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use eqas_core::EnvKind;

pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "eqas",
    version,
    about = "Evolutionary search over quantum circuit policies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an NSGA-II architecture search and write its report.
    Search(SearchArgs),
    /// Train a genome for several independent trials.
    Train(TrainArgs),
    /// Print the alternating-layer baseline genome of a given depth.
    Baseline(BaselineArgs),
    /// Operation frequencies and fitness curves from a search report.
    Report(ReportArgs),
    /// Show the blocks, gates and parameter counts of a genome.
    Decode(DecodeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long, env = "EQAS_CONFIG")]
    pub config: Option<PathBuf>,
    /// Environment (CartPole-v1 or MountainCar-v0).
    #[arg(long, env = "EQAS_ENV")]
    pub env: Option<EnvKind>,
    /// Root seed.
    #[arg(long, env = "EQAS_SEED")]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, env = "EQAS_WORKERS")]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, env = "EQAS_OUT")]
    pub out: Option<PathBuf>,
    /// Training episodes (for search: the budget before the episode factor).
    #[arg(long, env = "EQAS_EPISODES")]
    pub episodes: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, env = "EQAS_GENERATIONS")]
    pub generations: Option<usize>,
    #[arg(long, env = "EQAS_POP_SIZE")]
    pub pop_size: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Genome such as `1-2-3-0`.
    pub genome: String,
    #[command(flatten)]
    pub common: Common,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, env = "EQAS_TRIALS", default_value_t = 1)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    #[arg(long, env = "EQAS_DEPTH", default_value_t = 6)]
    pub depth: usize,
    /// Also report the parameter counts on this environment.
    #[arg(long, env = "EQAS_ENV")]
    pub env: Option<EnvKind>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Search report JSON.
    pub report: PathBuf,
    #[arg(long, env = "EQAS_TOP_K", default_value_t = 10)]
    pub top_k: usize,
    /// Smoothing window for frequency and fitness curves.
    #[arg(long, env = "EQAS_WINDOW", default_value_t = 5)]
    pub window: usize,
    #[arg(long, env = "EQAS_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    pub genome: String,
    #[arg(long, env = "EQAS_ENV", default_value = "CartPole-v1")]
    pub env: EnvKind,
}

/// Run a parsed command; output lines meant for stdout are returned.
pub fn run(cli: Cli) -> anyhow::Result<Vec<String>> {
    match cli.command {
        Command::Search(a) => commands::search(&a),
        Command::Train(a) => commands::train(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Report(a) => commands::report(&a),
        Command::Decode(a) => commands::decode(&a),
    }
}
