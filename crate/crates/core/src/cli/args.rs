use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "rellich",
    version,
    about = "Radial ground states and symmetry-breaking certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the radial ground state and verify it.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Second-variation test for symmetry breaking.
    #[command(allow_negative_numbers = true)]
    Certify(SolveArgs),
    /// Scan the second-variation gap over a range of lambda.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Dimensional constants, exponent windows and the linear constant.
    #[command(allow_negative_numbers = true)]
    Table(TableArgs),
    /// Translated-bubble quotients for the critical exponent.
    #[command(allow_negative_numbers = true)]
    Bubble(BubbleArgs),
    /// Run the built-in invariant suite.
    Selfcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Grid and solver overrides shared by the solve-bearing commands.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericArgs {
    /// Half-width T of the computational interval [-T, T].
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Number of grid points (rounded up to odd).
    #[arg(long)]
    pub points: Option<usize>,
    /// Residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap.
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub numeric: NumericArgs,
    /// Result file; the profile goes next to it as `<stem>_profile.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub q: Option<f64>,
    /// `lo:hi`
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_range: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub numeric: NumericArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TableArgs {
    /// `lo:hi`, inclusive.
    #[arg(long)]
    pub n_range: Option<String>,
    /// Add the closed-form constant of the linear problem over a lambda grid.
    #[arg(long)]
    pub linear: bool,
    /// Add the exponent window for symmetry breaking.
    #[arg(long)]
    pub windows: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_range: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct BubbleArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Comma-separated distances |y|.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
