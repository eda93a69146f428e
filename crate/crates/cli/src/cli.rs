use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ising", version, about = "2D Ising Metropolis simulations and labeled microstate corpora")]
pub struct Cli {
    /// Key-value config file with [lattice], [simulation] and [dataset] sections.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Increase diagnostic output (repeatable).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its trace and final lattice.
    Simulate(SimulateArgs),
    /// Generate labeled image corpora.
    Generate(GenerateArgs),
    /// Check a corpus against its manifest.
    Validate(ValidateArgs),
    /// Emit a magnetization-vs-sweep series.
    Trace(TraceArgs),
    /// Exact thermodynamics of a tiny lattice by enumeration.
    Exact(ExactArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct LatticeArgs {
    /// Boundary condition: periodic, antiperiodic or skewed.
    #[arg(long)]
    pub bc: Option<String>,
    /// Coupling J (negative for an anti-ferromagnet).
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// External field B.
    #[arg(long, allow_negative_numbers = true)]
    pub field: Option<f64>,
    /// Lattice size as ROWSxCOLS or a single side length.
    #[arg(long)]
    pub size: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Temperature in units of J/k_B.
    #[arg(long, allow_negative_numbers = true)]
    pub temp: Option<f64>,
    /// Number of sweeps to run.
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Initial state: auto, hot or ordered.
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Corpus root directory.
    #[arg(long, alias = "out")]
    pub root: Option<PathBuf>,
    /// Restrict to these boundary conditions (repeatable).
    #[arg(long = "only-bc")]
    pub only_bc: Vec<String>,
    /// Base seed for all image seeds.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Lattice size as ROWSxCOLS or a single side length.
    #[arg(long)]
    pub size: Option<String>,
    /// Thermalization sweeps per image.
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Temperature grid step.
    #[arg(long)]
    pub temp_step: Option<f64>,
    /// Initial state: auto, hot or ordered.
    #[arg(long)]
    pub start: Option<String>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// A manifest.json, a corpus directory, or a root holding several corpora.
    pub manifest: PathBuf,
    /// Also run the 4x4 Metropolis-vs-enumeration agreement check.
    #[arg(long)]
    pub oracle: bool,
    /// Re-simulate this many records per corpus and compare bytes.
    #[arg(long, default_value_t = 0)]
    pub regenerate: usize,
    /// Require split counts equal to the default 1300-image table.
    #[arg(long)]
    pub require_default_counts: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum SeriesFormat {
    #[default]
    Tsv,
    Csv,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Existing trace file; without it a simulation is run from the flags.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = SeriesFormat::Tsv)]
    pub format: SeriesFormat,
    /// Write the series here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw magnetization against sweep into this PNG.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Temperatures to evaluate (repeatable).
    #[arg(long = "temp", allow_negative_numbers = true)]
    pub temps: Vec<f64>,
    /// Print the ground-state energy and degeneracy instead.
    #[arg(long)]
    pub ground_state: bool,
}
