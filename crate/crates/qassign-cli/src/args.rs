//! Command-line surface. Every subcommand's arguments serialize into the run
//! manifest, and `rerun` replays a manifest verbatim.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "qassign",
    about = "Noise-aware qubit assignment experiments on simulated device graphs",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a grid noisemap layout file, optionally with a planted
    /// optimal path.
    GenNoisemap(GenArgs),
    /// Score every simple-path assignment of a circuit on a layout.
    Sweep(SweepArgs),
    /// Run simulated-annealing trials against the matched random baseline.
    Anneal(AnnealArgs),
    /// Concordance statistics and locality tables from a sweep.
    Report(ReportArgs),
    /// Re-execute the command recorded in a run manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct GenArgs {
    #[arg(long, default_value_t = 5)]
    pub rows: usize,
    #[arg(long, default_value_t = 5)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Single-qubit error range.
    #[arg(long, default_value_t = 1e-3)]
    pub eps_lo: f64,
    #[arg(long, default_value_t = 4e-3)]
    pub eps_hi: f64,
    /// Two-qubit error range.
    #[arg(long, default_value_t = 5e-3)]
    pub eta_lo: f64,
    #[arg(long, default_value_t = 2e-2)]
    pub eta_hi: f64,
    /// Readout flip-rate ranges.
    #[arg(long, default_value_t = 0.01)]
    pub p10_lo: f64,
    #[arg(long, default_value_t = 0.05)]
    pub p10_hi: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p01_lo: f64,
    #[arg(long, default_value_t = 0.08)]
    pub p01_hi: f64,
    /// Plant a known-optimal path of this length.
    #[arg(long)]
    pub planted_len: Option<usize>,
    /// Weight factor applied along the planted path.
    #[arg(long, default_value_t = 0.05)]
    pub planted_factor: f64,
    /// Output layout file.
    #[arg(long, short = 'o')]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitFamily {
    Ghz,
    Swapnet,
    Clifford,
    Qft,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    None,
    Local,
    Global,
    Coherent,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct CircuitArgs {
    #[arg(long, value_enum)]
    pub circuit: CircuitFamily,
    /// Number of circuit qubits (= assignment path length).
    #[arg(long)]
    pub n: usize,
    /// Basis index for the qft family.
    #[arg(long, default_value_t = 0)]
    pub j: u64,
    /// Hop count for the swapnet family (defaults to n - 1).
    #[arg(long)]
    pub hops: Option<usize>,
    /// Bloch angles of the transported swapnet state.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Layer count for the random family.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Seed for the clifford / random families.
    #[arg(long, default_value_t = 0)]
    pub circuit_seed: u64,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct SweepArgs {
    #[arg(long)]
    pub layout: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long, value_enum, default_value_t = NoiseMode::Local)]
    pub noise: NoiseMode,
    /// Shots per Loschmidt estimate; 0 means exact.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    /// Apply confusion-matrix readout correction to sampled estimates.
    #[arg(long, default_value_t = false)]
    pub readout_correct: bool,
    /// Ensemble size for the random-circuit survival average; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub rand_ensemble: usize,
    /// Scale factor applied to all layout weights.
    #[arg(long, default_value_t = 1.0)]
    pub weight_scale: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, short = 'o')]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct AnnealArgs {
    #[arg(long)]
    pub layout: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long, value_enum, default_value_t = NoiseMode::Local)]
    pub noise: NoiseMode,
    #[arg(long, default_value_t = 0.10)]
    pub t0: f64,
    /// Exponential decay rate; ignored with --log-schedule.
    #[arg(long, default_value_t = 0.987)]
    pub alpha: f64,
    /// Use the logarithmic schedule T0 / (1 + ln(1 + i)).
    #[arg(long, default_value_t = false)]
    pub log_schedule: bool,
    #[arg(long, default_value_t = 150)]
    pub steps: usize,
    /// Neighborhood bound.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Evaluate costs on demand instead of precomputing the full table.
    #[arg(long, default_value_t = false)]
    pub online: bool,
    /// Reject assignments whose worst readout flip rate exceeds this bound.
    #[arg(long, default_value_t = 0.15)]
    pub reject_threshold: f64,
    /// Number of per-trial trace CSVs to write (first N trials).
    #[arg(long, default_value_t = 10)]
    pub traces: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short = 'o')]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct ReportArgs {
    /// sweep.csv produced by the sweep command.
    #[arg(long)]
    pub sweep: PathBuf,
    /// Layout the sweep was computed on (for the locality table).
    #[arg(long)]
    pub layout: PathBuf,
    /// Percentiles for the conditional-exceedance curves.
    #[arg(long, value_delimiter = ',', default_values_t = (1..20).map(|i| i as f64 * 5.0).collect::<Vec<_>>())]
    pub ks: Vec<f64>,
    /// Neighborhood bounds for the locality table.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0, 1, 2, 3])]
    pub locality_ks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short = 'o')]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct RerunArgs {
    /// Manifest written by a previous run.
    #[arg(long)]
    pub manifest: PathBuf,
}
