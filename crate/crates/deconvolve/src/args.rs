//! Command-line argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Density deconvolution for samples measured with additive Gaussian error.
#[derive(Debug, Parser)]
#[command(name = "deconvolve", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a density from a CSV of observed values and error scales.
    Estimate(EstimateArgs),
    /// Run a replicated simulation experiment from a JSON plan file.
    Simulate(SimulateArgs),
    /// Report the smoothing selections a sample would receive.
    Bandwidth(BandwidthArgs),
}

/// Estimation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Error-inflation extrapolation estimator with variance and band.
    Simex,
    /// Deconvoluting kernel estimator (requires one common error scale).
    Dke,
    /// Heteroscedastic-adjusted deconvoluting kernel estimator.
    AdjustedDke,
    /// Kernel density estimate of the observed values, error ignored.
    Naive,
}

/// First-level selection rule for the extrapolation estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LambdaRuleArg {
    /// Rule-of-thumb level, linear in the reference bandwidth (default).
    Rot,
    /// Rule-of-thumb level solving the bandwidth equation exactly
    /// (quadratic in the reference bandwidth; selects less smoothing).
    RotSquared,
    /// Variance-minimizing level (reports when the search pins to a bound).
    Mise,
    /// Fixed level supplied with --lambda1.
    Explicit,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EstimateArgs {
    /// Input CSV: `y,sigma` rows, header optional; a single `y` column
    /// needs --sigma for the common error scale.
    #[arg(long)]
    pub input: PathBuf,

    /// Output CSV path; columns t,fhat,variance,lo,hi. A manifest with all
    /// resolved parameters is written alongside as <output>.manifest.json.
    #[arg(long)]
    pub output: PathBuf,

    /// Estimator to fit.
    #[arg(long, value_enum, default_value_t = Method::Simex)]
    pub method: Method,

    /// Common error scale: required for single-column input, optional
    /// override of the deconvolution scale for --method dke.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Number of evaluation grid points.
    #[arg(long, default_value_t = 512)]
    pub grid_points: usize,

    /// Lower end of an explicit evaluation range (needs --grid-max;
    /// default pads the data range by four combined spreads).
    #[arg(long)]
    pub grid_min: Option<f64>,

    /// Upper end of an explicit evaluation range (needs --grid-min).
    #[arg(long)]
    pub grid_max: Option<f64>,

    /// How the first inflation level is chosen (simex only).
    #[arg(long, value_enum, default_value_t = LambdaRuleArg::Rot)]
    pub lambda_rule: LambdaRuleArg,

    /// Explicit first inflation level for --lambda-rule explicit.
    #[arg(long)]
    pub lambda1: Option<f64>,

    /// Number of inflation levels in the grid.
    #[arg(long, default_value_t = 50)]
    pub s: usize,

    /// Width of the inflation-level grid.
    #[arg(long, default_value_t = 3.0)]
    pub span: f64,

    /// Confidence level for the pointwise band (simex only).
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    /// Seed recorded in the manifest (estimation itself is deterministic).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Rule-of-thumb bandwidth multiplier (0.9 and 1.06 are the common
    /// choices).
    #[arg(long, default_value_t = 1.06)]
    pub a0: f64,

    /// Plug-in bandwidth multiplier for the deconvoluting estimators.
    #[arg(long, default_value_t = 1.05)]
    pub c0: f64,

    /// Explicit kernel bandwidth, overriding the method's default selector.
    #[arg(long)]
    pub bandwidth: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON experiment plan.
    #[arg(long)]
    pub plan: PathBuf,

    /// Output CSV path; an aligned text table is written next to it with
    /// the extension replaced by .txt.
    #[arg(long)]
    pub output: PathBuf,

    /// Worker threads for replicates (default: all cores). The output is
    /// byte-identical for every thread count.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Override the plan file's seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BandwidthArgs {
    /// Input CSV: `y,sigma` rows, or a single `y` column with --sigma.
    #[arg(long)]
    pub input: PathBuf,

    /// Common error scale for single-column input.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Rule-of-thumb bandwidth multiplier.
    #[arg(long, default_value_t = 1.06)]
    pub a0: f64,

    /// Number of inflation levels in the reported grid.
    #[arg(long, default_value_t = 50)]
    pub s: usize,

    /// Width of the inflation-level grid.
    #[arg(long, default_value_t = 3.0)]
    pub span: f64,

    /// Write the key=value report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
