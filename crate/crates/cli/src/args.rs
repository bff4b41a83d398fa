use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entropyne_core::GridSpec;

#[derive(Debug, Parser)]
#[command(name = "entropyne", version, about = "Thermodynamic distance from Gibbs states")]
pub struct Cli {
    /// Worker threads for per-cell parallelism. Output does not depend on it.
    #[arg(long, global = true, env = "ENTROPYNE_THREADS")]
    pub threads: Option<usize>,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Seed for the randomised suites; echoed into every output's metadata.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delta of a qubit over (theta, T).
    QubitGrid(QubitGridArgs),
    /// Delta of thermal light against the parametric amplifier over (nbar, T).
    AmplifierGrid(AmplifierGridArgs),
    /// SU(1,1) partition function of a quadratic Hamiltonian.
    GaussianZ(GaussianZArgs),
    /// Tsallis relative entropy or its small-delta series for two matrices.
    Tsallis(TsallisArgs),
    /// Run the oracle suites and report one JSON line per family.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct QubitGridArgs {
    #[arg(long)]
    pub p_norm: f64,
    #[arg(long)]
    pub h_norm: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub h0: f64,
    /// start:stop:count, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: GridSpec,
    /// start:stop:count; must not contain or straddle zero.
    #[arg(long, allow_hyphen_values = true)]
    pub temp: GridSpec,
}

#[derive(Debug, Args)]
pub struct AmplifierGridArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.1)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega_t: f64,
    #[arg(long, default_value = "0.2:10:100")]
    pub temp: GridSpec,
    #[arg(long, default_value = "0.2:10:100")]
    pub nbar: GridSpec,
}

#[derive(Debug, Args)]
pub struct GaussianZArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub omega1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub omega2_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub omega2_im: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub omega3: f64,
    #[arg(
        long,
        conflicts_with = "temp",
        required_unless_present = "temp",
        allow_negative_numbers = true
    )]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub temp: Option<f64>,
    /// Also report the truncated Fock-space trace.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct TsallisArgs {
    #[arg(long)]
    pub rho_file: PathBuf,
    #[arg(long)]
    pub sigma_file: PathBuf,
    #[arg(
        long,
        conflicts_with = "delta_series",
        required_unless_present = "delta_series",
        allow_negative_numbers = true
    )]
    pub q: Option<f64>,
    /// Comma-separated deltas at which to compare the series with S_(1+delta).
    #[arg(long, value_delimiter = ',')]
    pub delta_series: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Subsampled suites.
    #[arg(long)]
    pub quick: bool,
    /// Perturb one closed form so the harness can be seen to fail.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}
