use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const OUT_DIR_ENV: &str = "SPOTVOL_OUT_DIR";

const CUTOFF_HELP: &str = "\
Cut-off conventions (all logarithms are base 2):
  tau   standard  sum over i = [n/log2 n] .. n-1, normalizer n - n/log2 n
        tilde     sum over i = [n/2] .. n-1, normalizer n/2
        custom:S  sum over i = S .. n-1, normalizer n - S
  sigma standard  band [sqrt n]+1 .. 2[sqrt n], weight sqrt n, bias 7*pi^2/3 * t_hat
        custom:L,H band L .. H, weight n/(H-L+1), bias weight * sum of eigenvalues
Observations must number n > 16.

Function specs: const:C | cos:T0,T1,... | jump:LO,HI,POINT | file:PATH
(cos:T0,T1,... means T0 + 2*sum Tk cos(k*pi*t)).

Exit codes: 0 success, 1 invalid input, 2 failed check.";

#[derive(Debug, Parser)]
#[command(
    name = "spotvol",
    version,
    about = "Spectral estimation of spot volatility and noise variance from noisy high-frequency data",
    after_help = CUTOFF_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate noisy observations of a time- or space-transformed Brownian motion.
    #[command(after_help = CUTOFF_HELP)]
    Simulate(SimulateArgs),
    /// Estimate the noise variance function tau^2 as a cosine series.
    #[command(name = "estimate-tau", after_help = CUTOFF_HELP)]
    EstimateTau(EstimateArgs),
    /// Estimate the spot volatility function sigma^2 as a cosine series.
    #[command(name = "estimate-sigma", after_help = CUTOFF_HELP)]
    EstimateSigma(EstimateArgs),
    /// Monte Carlo MISE over a list of sample sizes, with a log-log rate fit.
    #[command(name = "mise-sweep", after_help = CUTOFF_HELP)]
    MiseSweep(SweepArgs),
    /// Write the data panels of one illustration scenario (n = 25000).
    #[command(name = "replicate-figure", after_help = CUTOFF_HELP)]
    ReplicateFigure(FigureArgs),
    /// Run the spectral identity checks and print a residual table.
    #[command(after_help = CUTOFF_HELP)]
    Selfcheck,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Key-value file with any of: model, n, seed, sigma2, tau2, noise. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// tbm or sbm [default: tbm]
    #[arg(long)]
    pub model: Option<String>,
    /// Number of observations (> 16)
    #[arg(long)]
    pub n: Option<usize>,
    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replication index within the seed [default: 0]
    #[arg(long)]
    pub replication: Option<u64>,
    /// Spot volatility sigma^2 as a function spec
    #[arg(long)]
    pub sigma2: Option<String>,
    /// Noise variance tau^2 as a function spec
    #[arg(long)]
    pub tau2: Option<String>,
    /// gaussian or t3 (Student t with 3 degrees of freedom, scaled to unit variance) [default: gaussian]
    #[arg(long)]
    pub noise: Option<String>,
    /// Output CSV (`-` for stdout) [default: $SPOTVOL_OUT_DIR/simulate.csv]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Input CSV with a `y` column (e.g. `i,t,y`) or a single column
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Use only the first n observations (> 16) [default: all]
    #[arg(long)]
    pub n: Option<usize>,
    /// Series truncation N
    #[arg(long = "N", default_value_t = 3)]
    pub big_n: usize,
    /// Cut-off rule of this estimator: tau: standard|tilde|custom:S; sigma: standard|custom:L,H
    #[arg(long, default_value = "standard")]
    pub cutoff: String,
    /// estimate-sigma only: cut-off rule of the tau^2 estimate inside the bias correction [default: standard]
    #[arg(long = "tau-cutoff")]
    pub tau_cutoff: Option<String>,
    /// Evaluate the estimate at t = i/m, i = 0..m
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// Output CSV `t,estimate` (`-` for stdout); sidecars `<out>.theta.csv` and `<out>.config.txt`
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Scenario name (fig2, fig2-lownoise, fig3, fig4, fig5, const-sigma, const-tau, rate-tau, rate-sigma, null)
    #[arg(long)]
    pub scenario: String,
    /// Comma-separated sample sizes
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    /// Replications per sample size (>= 2)
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// tau or sigma
    #[arg(long, default_value = "sigma")]
    pub kind: String,
    /// oracle:MAX | fixed:N | theoretic:SMOOTHNESS
    #[arg(long = "n-rule", default_value = "oracle:12")]
    pub n_rule: String,
    /// Cut-off rule of the estimator selected by --kind
    #[arg(long, default_value = "standard")]
    pub cutoff: String,
    /// kind sigma only: cut-off rule of the tau^2 estimate inside the bias correction [default: standard]
    #[arg(long = "tau-cutoff")]
    pub tau_cutoff: Option<String>,
    /// Fail with exit code 2 unless the fitted log-log slope is at most this value
    #[arg(long = "max-slope", allow_hyphen_values = true)]
    pub max_slope: Option<f64>,
    /// Output directory [default: $SPOTVOL_OUT_DIR or .]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig2, fig3, fig4 or fig5
    pub figure: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory [default: $SPOTVOL_OUT_DIR or .]
    #[arg(long)]
    pub out: Option<PathBuf>,
}
