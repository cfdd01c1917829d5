use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use masking::masklib::DEFAULT_ENTROPY_FLOOR;
use masking::Mode;

#[derive(Parser, Debug)]
#[command(name = "masking", version, about = "Quantum information masking toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply a masker to a list of states and check the masking conditions.
    Mask(MaskArgs),
    /// Search the isometry manifold for the best masker of a state set.
    Witness(WitnessArgs),
    /// Commit to a state with a masker, optionally cheating at unveiling.
    Commit(CommitArgs),
    /// Sample random inputs and report which ones a masker hides.
    Probe(ProbeArgs),
}

/// Where the masker comes from: a built-in construction or a JSON file.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct MaskerSource {
    /// `sharp:<d>`, `classical-bit` or `multiparty:<d>`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Masker file: {"dA":..,"dB":..,"iso":[[[re,im],..],..]}.
    #[arg(long)]
    pub masker: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = masking::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_ENTROPY_FLOOR)]
    pub entropy_floor: f64,
}

#[derive(Args, Debug)]
pub struct MaskArgs {
    #[command(flatten)]
    pub source: MaskerSource,
    /// State list: a JSON array of states or {"states": [...]}.
    #[arg(long)]
    pub states: PathBuf,
    #[arg(long, default_value = "span")]
    pub mode: Mode,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub states: PathBuf,
    /// Optimizer configuration (JSON); unspecified fields take defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the mode in the configuration.
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CommitArgs {
    /// The state committed to.
    #[arg(long)]
    pub psi: PathBuf,
    #[command(flatten)]
    pub source: MaskerSource,
    /// Unveil `Σ e^{ikφ} ψ_k |k⟩` instead of the committed state.
    #[arg(long, allow_negative_numbers = true)]
    pub cheat: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub source: MaskerSource,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = masking::witness::DEFAULT_PROBE_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_ENTROPY_FLOOR)]
    pub entropy_floor: f64,
    /// Also write the masked samples' amplitude profiles as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
