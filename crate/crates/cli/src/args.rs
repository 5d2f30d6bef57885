use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hadamard_ga::{FitnessKind, MutationStrategy, Seed};

#[derive(Debug, Parser)]
#[command(name = "hadamard-ga", version, about = "Genetic-algorithm search for Hadamard matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a Hadamard matrix of order m = 4k.
    Search(SearchArgs),
    /// Check whether a matrix file holds a Hadamard matrix ("-" reads stdin).
    Verify {
        path: PathBuf,
    },
    /// Write the Sylvester Hadamard matrix of order 2^power.
    Sylvester {
        #[arg(long)]
        power: u32,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweeps and timing comparisons.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FitnessArg {
    F1,
    F2,
}

impl From<FitnessArg> for FitnessKind {
    fn from(f: FitnessArg) -> Self {
        match f {
            FitnessArg::F1 => FitnessKind::F1,
            FitnessArg::F2 => FitnessKind::F2,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MutationArg {
    Shared,
    PerMatrix,
    Multi,
}

impl From<MutationArg> for MutationStrategy {
    fn from(m: MutationArg) -> Self {
        match m {
            MutationArg::Shared => MutationStrategy::Shared,
            MutationArg::PerMatrix => MutationStrategy::PerMatrix,
            MutationArg::Multi => MutationStrategy::Multi,
        }
    }
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    s.parse::<Seed>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["order", "k"])))]
pub struct SearchArgs {
    /// Matrix order m (a multiple of 4).
    #[arg(long)]
    pub order: Option<usize>,
    /// k, with m = 4k.
    #[arg(long)]
    pub k: Option<usize>,
    /// N; the population holds 4N matrices.
    #[arg(long, default_value_t = 1000)]
    pub population: usize,
    /// T, the generation cap.
    #[arg(long = "max-iter", default_value_t = 100_000)]
    pub max_iter: u64,
    /// NC, columns mutated per offspring.
    #[arg(long, default_value_t = 1)]
    pub nc: usize,
    /// NR, row pairs tried per mutated column.
    #[arg(long, default_value_t = 2)]
    pub nr: usize,
    #[arg(long, value_enum, default_value_t = FitnessArg::F2)]
    pub fitness: FitnessArg,
    #[arg(long, value_enum, default_value_t = MutationArg::Multi)]
    pub mutation: MutationArg,
    /// Decimal or 0x-hex seed; drawn from the OS when omitted.
    #[arg(long, value_parser = parse_seed)]
    pub seed: Option<Seed>,
    /// Run record (JSON) destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Min-fitness trace (CSV) destination.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Reinitialize offspring after this many generations without progress.
    #[arg(long = "stall-window")]
    pub stall_window: Option<usize>,
    #[arg(long = "time-budget-secs")]
    pub time_budget_secs: Option<f64>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Mean iterations to success over an NC x NR grid.
    Grid(GridArgs),
    /// Loop wall time under F1 versus F2.
    Fitness(FitnessBenchArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    #[arg(long, default_value_t = 1000)]
    pub population: usize,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    pub max_iter: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
    pub nc: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
    pub nr: Vec<usize>,
    /// Runs per cell.
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long, value_enum, default_value_t = FitnessArg::F2)]
    pub fitness: FitnessArg,
    #[arg(long, value_enum, default_value_t = MutationArg::Multi)]
    pub mutation: MutationArg,
    /// Base seed; run seeds are offsets from it.
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    pub seed: Seed,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitnessBenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [20, 40])]
    pub orders: Vec<usize>,
    /// N; defaults to 1000 (10000 with --long).
    #[arg(long)]
    pub population: Option<usize>,
    /// Defaults to 1000 (10000 with --long).
    #[arg(long)]
    pub iterations: Option<u64>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Full-scale workload: 40000 matrices, 10^4 iterations.
    #[arg(long)]
    pub long: bool,
    #[arg(long, value_parser = parse_seed)]
    pub seed: Option<Seed>,
    #[arg(long)]
    pub workers: Option<usize>,
}
