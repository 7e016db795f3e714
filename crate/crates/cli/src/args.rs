use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum and classical walks on star graphs with extra bonds",
    args_override_self = true
)]
pub struct Cli {
    /// Output directory; every command writes its files and manifest.json here.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads for ensembles and censuses (0 = all cores).
    #[arg(long, global = true, env = "QWALK_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// key=value file mirroring the command-line flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, degeneracies and density of states of one graph.
    Spectrum(SpectrumArgs),
    /// Return-probability time series and long-time averages of one graph.
    Walk(WalkArgs),
    /// Monte Carlo ensembles over random bond placements.
    Ensemble(EnsembleArgs),
    /// Exhaustive count of distinct eigenvalue sets per bond count.
    Census(CensusArgs),
    /// Search for a bond configuration with a given spectrum.
    Verify(VerifyArgs),
    /// Write a graph in edge-list format.
    Graph(GraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Star,
    Complete,
    /// Star plus the explicit leaf bonds given by --bonds.
    Bonds,
    /// Star plus --b random leaf bonds drawn with --seed.
    Random,
    /// Edge-list file given by --graph.
    File,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TopologyArgs {
    #[arg(long, value_enum, default_value = "star")]
    pub topology: Topology,
    /// Node count (not needed for --topology file).
    #[arg(long)]
    pub n: Option<usize>,
    /// Leaf bonds as `i-j` pairs separated by commas, e.g. `2-3,4-7`.
    #[arg(long)]
    pub bonds: Option<String>,
    /// Number of random extra bonds.
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Log,
    Linear,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, value_enum, default_value = "log")]
    pub grid: GridKind,
    /// Defaults to 0.01 on a log grid and 0 on a linear grid.
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    /// Also write eigenvectors.csv.
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WalkArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Also write node-to-node series for `K,J` (target, start; 1-based).
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub n: usize,
    /// Single bond count.
    #[arg(long, conflicts_with = "sweep")]
    pub b: Option<usize>,
    /// Inclusive bond-count range `lo:hi`.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Realizations per bond count.
    #[arg(long, default_value_t = 10_000)]
    pub r: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Bond counts that get an eigenvalue staircase (comma separated; empty
    /// for none). Counts above b_max are skipped.
    #[arg(long, default_value = "4,10,18,26,32")]
    pub staircase_b: String,
    #[arg(long, default_value_t = -0.5)]
    pub e_min: f64,
    /// Defaults to n + 1.
    #[arg(long)]
    pub e_max: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub e_step: f64,
    /// Skip the per-b time-series files.
    #[arg(long)]
    pub no_series: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    /// Restrict to these bond counts (comma separated).
    #[arg(long)]
    pub b: Option<String>,
    /// Ignore the size cap and work budget.
    #[arg(long)]
    pub force: bool,
    #[arg(long, default_value_t = 8)]
    pub n_cap: usize,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub b: usize,
    /// Eigenvalues, comma separated, any order.
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, default_value_t = 5e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
}
