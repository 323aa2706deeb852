//! Command-line surface.
//!
//! Four subcommands wrap the library: `estimate` runs the two-step
//! pipeline on a CSV dataset, `simulate` runs the seeded Monte Carlo
//! harness, `rates` evaluates the bandwidth formulas and rate exponents,
//! and `diagnose` runs the bandwidth-condition and normality diagnostics.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "resdens",
    version,
    about = "Kernel estimation of the regression-error density from estimated residuals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (0 = all cores); falls back to RESDENS_THREADS.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub output: Option<String>,

    /// Output format; CSV is available for curves and tables only.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Estimate the error density from a CSV dataset (header x1..xd,y).
    Estimate(EstimateArgs),
    /// Monte Carlo study of the feasible and oracle estimators.
    Simulate(SimulateArgs),
    /// Bandwidth formulas, rate exponents and the remainder at given n, d.
    Rates(RatesArgs),
    /// Assumption diagnostics and the asymptotic-normality check.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    /// Input CSV with header `x1,...,xd,y`.
    #[arg(long)]
    pub input: String,

    /// Constant scaling the first-step bandwidth formula, in (0, 1].
    #[arg(long, default_value_t = 1.0, conflicts_with = "b0")]
    pub c0: f64,

    /// Relative trim margin applied to the covariate range per side.
    #[arg(long, default_value_t = 0.001)]
    pub delta: f64,

    /// Evaluation grid size when --points is not given.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,

    /// Explicit evaluation points (comma separated), e.g. --points=-1,0,1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,

    /// Override the first-step bandwidth (requires --b1).
    #[arg(long, requires = "b1")]
    pub b0: Option<f64>,

    /// Override the second-step bandwidth (requires --b0).
    #[arg(long, requires = "b0")]
    pub b1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelArg {
    Sine1d,
    Trivariate,
}

impl From<ModelArg> for resdens::Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sine1d => resdens::Model::Sine1d,
            ModelArg::Trivariate => resdens::Model::Trivariate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Standard,
    OracleRegression,
}

impl From<ModeArg> for resdens::RegressionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Standard => resdens::RegressionMode::Standard,
            ModeArg::OracleRegression => resdens::RegressionMode::OracleRegression,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSourceArg {
    TrueErrors,
    Residuals,
}

impl From<SigmaSourceArg> for resdens::simulation::SigmaSource {
    fn from(s: SigmaSourceArg) -> Self {
        match s {
            SigmaSourceArg::TrueErrors => resdens::simulation::SigmaSource::TrueErrors,
            SigmaSourceArg::Residuals => resdens::simulation::SigmaSource::Residuals,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    /// Sample size per replicate.
    #[arg(long)]
    pub n: usize,

    /// Number of replicates.
    #[arg(long)]
    pub reps: usize,

    /// Constant scaling the first-step bandwidth formula, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,

    /// RNG seed (replicates use independent streams derived from it).
    #[arg(long)]
    pub seed: u64,

    /// Evaluation points for the bias/variance/MSE table.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.0, 0.0, 1.0])]
    pub points: Vec<f64>,

    /// Also emit mean density curves on a grid of this many points.
    #[arg(long)]
    pub curves: Option<usize>,

    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    pub mode: ModeArg,

    /// Which sigma feeds the rule-of-thumb density bandwidth.
    #[arg(long, value_enum, default_value_t = SigmaSourceArg::TrueErrors)]
    pub sigma_source: SigmaSourceArg,
}

#[derive(Debug, Args, Serialize)]
pub struct RatesArgs {
    /// Covariate dimension.
    #[arg(long)]
    pub d: usize,

    /// Sample size at which to evaluate the formulas.
    #[arg(long)]
    pub n: usize,

    /// Error scale feeding the rule-of-thumb bandwidth.
    #[arg(long, default_value_t = 1.0, conflicts_with = "b1")]
    pub sigma: f64,

    /// Constant scaling the first-step bandwidth formula.
    #[arg(long, default_value_t = 1.0, conflicts_with = "b0")]
    pub c0: f64,

    /// Evaluate at an explicit first-step bandwidth (requires --b1).
    #[arg(long, requires = "b1")]
    pub b0: Option<f64>,

    /// Evaluate at an explicit second-step bandwidth (requires --b0).
    #[arg(long, requires = "b0")]
    pub b1: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct DiagnoseArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    /// Sample size per replicate.
    #[arg(long)]
    pub n: usize,

    /// Number of replicates (at least 100).
    #[arg(long)]
    pub reps: usize,

    /// Point at which the normality of the estimator is checked.
    #[arg(long, allow_hyphen_values = true)]
    pub e: f64,

    /// RNG seed.
    #[arg(long)]
    pub seed: u64,

    /// First-step bandwidth; defaults to the undersmoothing order
    /// n^(-8/(5(2d+4))) the normality regime calls for.
    #[arg(long)]
    pub b0: Option<f64>,

    /// Second-step bandwidth; defaults to 1.06 n^(-1/5).
    #[arg(long)]
    pub b1: Option<f64>,
}
