//! Monte Carlo experiments: MISE sweeps over `n`, rate fits and figure
//! replication.
//!
//! Replications run in parallel but every random stream is keyed by
//! `(seed, replication, role)` and results are aggregated in replication
//! order, so a report depends only on its [`ExperimentConfig`].

pub mod figure;
pub mod scenario;
pub mod stats;

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{argmin_first, truncation_errors, CutoffConfig, EstimatorKind, SpectralEstimator};
use crate::funcspace::FunctionSpec;
use crate::simulate::check_n;

pub use figure::{replicate_figure, run_figure, FigureId, FigureRun};
pub use scenario::{Scenario, SigmaSource, SCENARIO_NAMES};
pub use stats::{normality_check, rate_fit, NormalityCheck, RateFit};

/// Largest share of replications that may fail before a run is rejected.
pub const MAX_DROP_FRACTION: f64 = 0.05;

/// How the truncation level `N` is chosen per replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NRule {
    /// Minimizer of the grid error against the truth over `0..=max`.
    Oracle { max: usize },
    Fixed(usize),
    /// `[n^{1/(2β+1)}]` for `τ²`, `[n^{1/(4α+2)}]` for `σ²`.
    Theoretic { smoothness: f64 },
}

impl NRule {
    /// Truncation for size `n`; `None` for the oracle rule.
    pub fn level(&self, kind: EstimatorKind, n: usize) -> Option<usize> {
        match *self {
            NRule::Oracle { .. } => None,
            NRule::Fixed(big_n) => Some(big_n),
            NRule::Theoretic { smoothness } => {
                let exponent = match kind {
                    EstimatorKind::Tau => 1.0 / (2.0 * smoothness + 1.0),
                    EstimatorKind::Sigma => 1.0 / (4.0 * smoothness + 2.0),
                };
                Some((n as f64).powf(exponent).floor() as usize)
            }
        }
    }

    fn max_level(&self, kind: EstimatorKind, n: usize) -> usize {
        match *self {
            NRule::Oracle { max } => max,
            _ => self.level(kind, n).unwrap_or(0),
        }
    }
}

impl fmt::Display for NRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NRule::Oracle { max } => write!(f, "oracle:{max}"),
            NRule::Fixed(n) => write!(f, "fixed:{n}"),
            NRule::Theoretic { smoothness } => write!(f, "theoretic:{smoothness}"),
        }
    }
}

impl FromStr for NRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::arg("n-rule", format!("`{s}`: expected oracle:MAX, fixed:N or theoretic:SMOOTHNESS"));
        let (tag, value) = s.split_once(':').ok_or_else(bad)?;
        match tag {
            "oracle" => Ok(NRule::Oracle { max: value.parse().map_err(|_| bad())? }),
            "fixed" => Ok(NRule::Fixed(value.parse().map_err(|_| bad())?)),
            "theoretic" => {
                let smoothness: f64 = value.parse().map_err(|_| bad())?;
                if smoothness.is_nan() || smoothness <= 0.0 {
                    return Err(bad());
                }
                Ok(NRule::Theoretic { smoothness })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub ns: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub kind: EstimatorKind,
    pub cutoff: CutoffConfig,
    pub n_rule: NRule,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps < 2 {
            return Err(Error::arg("reps", format!("need at least 2 replications, got {}", self.reps)));
        }
        if self.ns.is_empty() {
            return Err(Error::arg("n-list", "no sample sizes given"));
        }
        for &n in &self.ns {
            check_n(n)?;
            self.cutoff.resolve(n)?;
        }
        Ok(())
    }

    /// Key-value description of every setting, defaults included.
    pub fn to_kv(&self) -> String {
        let ns: Vec<String> = self.ns.iter().map(usize::to_string).collect();
        format!(
            "scenario={}\nmodel={}\nnoise={}\nn_list={}\nreps={}\nseed={}\nkind={}\ntau_rule={}\nsigma_band={}\nn_rule={}\nlog_base=2\n",
            self.scenario,
            self.scenario.model,
            self.scenario.noise,
            ns.join(","),
            self.reps,
            self.seed,
            self.kind,
            self.cutoff.tau_rule,
            self.cutoff.sigma_band,
            self.n_rule
        )
    }
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub replication: u64,
    /// Squared grid error `(1/n) Σ (est(i/n) − truth(i/n))²`.
    pub mise: f64,
    pub selected_n: usize,
    /// `‖est − truth‖_n / ‖truth‖_n`; NaN for an identically zero truth.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeSummary {
    pub n: usize,
    pub mise_mean: f64,
    pub mise_se: f64,
    pub replications: Vec<Replication>,
    /// Error messages of dropped replications, by replication index.
    pub dropped: Vec<(u64, String)>,
    pub elapsed: Duration,
}

impl SizeSummary {
    pub fn selected(&self) -> Vec<usize> {
        self.replications.iter().map(|r| r.selected_n).collect()
    }

    pub fn relative_errors(&self) -> Vec<f64> {
        self.replications.iter().map(|r| r.relative_error).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub sizes: Vec<SizeSummary>,
    /// Log-log fit of mean MISE on `n`; present with ≥ 3 sizes and positive
    /// errors.
    pub fit: Option<RateFit>,
}

impl ExperimentReport {
    pub fn mises(&self) -> Vec<f64> {
        self.sizes.iter().map(|s| s.mise_mean).collect()
    }

    /// Summary CSV: one `mise` row per size and a `slope` row when fitted.
    /// Wall-clock figures are excluded so reruns are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("record,n,mise_mean,mise_se,dropped,modal_n,slope,ci_lo,ci_hi\n");
        for s in &self.sizes {
            let modal = stats::mode(&s.selected()).map(|m| m.to_string()).unwrap_or_default();
            writeln!(out, "mise,{},{:e},{:e},{},{},,,", s.n, s.mise_mean, s.mise_se, s.dropped.len(), modal).unwrap();
        }
        if let Some(fit) = &self.fit {
            writeln!(out, "slope,,,,,,{:e},{:e},{:e}", fit.slope, fit.ci.0, fit.ci.1).unwrap();
        }
        out
    }

    /// Per-replication CSV.
    pub fn replications_csv(&self) -> String {
        let mut out = String::from("n,replication,mise,selected_n,relative_error\n");
        for s in &self.sizes {
            for r in &s.replications {
                writeln!(out, "{},{},{:e},{},{:e}", s.n, r.replication, r.mise, r.selected_n, r.relative_error).unwrap();
            }
        }
        out
    }

    pub fn timing_summary(&self) -> String {
        let mut out = String::new();
        for s in &self.sizes {
            writeln!(out, "n = {}: {:.3} s for {} replications", s.n, s.elapsed.as_secs_f64(), self.config.reps).unwrap();
        }
        out
    }
}

/// Replication index for the `r`-th draw at the `j`-th sample size.
pub fn replication_id(size_index: usize, r: usize) -> u64 {
    ((size_index as u64) << 32) | r as u64
}

fn run_one(
    cfg: &ExperimentConfig,
    est: &SpectralEstimator,
    fixed_truth: Option<&[f64]>,
    sim: Option<&crate::simulate::Simulator>,
    replication: u64,
) -> Result<Replication> {
    let n = est.n();
    let obs = match sim {
        Some(sim) => sim.observe(cfg.seed, replication),
        None => cfg.scenario.observe(n, cfg.seed, replication)?,
    };
    let own_truth;
    let truth = match fixed_truth {
        Some(t) => t,
        None => {
            own_truth = cfg.scenario.truth(&obs, cfg.kind).eval_grid(n);
            &own_truth
        }
    };
    let series = est.series(cfg.kind, &obs.y, cfg.n_rule.max_level(cfg.kind, n))?;
    let errors = truncation_errors(&series, truth);
    let selected_n = match cfg.n_rule {
        NRule::Oracle { .. } => argmin_first(&errors),
        _ => series.max_index(),
    };
    let mise = errors[selected_n];
    if !mise.is_finite() {
        return Err(Error::Domain(format!("non-finite error {mise}")));
    }
    let energy = truth.iter().map(|v| v * v).sum::<f64>() / n as f64;
    Ok(Replication { replication, mise, selected_n, relative_error: (mise / energy).sqrt() })
}

/// Monte Carlo MISE for every size in the configuration.
pub fn run_mise(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut sizes = Vec::with_capacity(cfg.ns.len());
    for (j, &n) in cfg.ns.iter().enumerate() {
        let start = Instant::now();
        let est = SpectralEstimator::new(n, &cfg.cutoff)?;
        let sim = cfg.scenario.fixed_simulator(n)?;
        let fixed_truth: Option<Vec<f64>> = match (&cfg.kind, &cfg.scenario.sigma2) {
            (EstimatorKind::Tau, _) => Some(cfg.scenario.tau2.eval_grid(n)),
            (EstimatorKind::Sigma, SigmaSource::Fixed(f)) => Some(f.eval_grid(n)),
            (EstimatorKind::Sigma, SigmaSource::BrownianPath { .. }) => None,
        };
        let outcomes: Vec<Result<Replication>> = (0..cfg.reps)
            .into_par_iter()
            .map(|r| run_one(cfg, &est, fixed_truth.as_deref(), sim.as_ref(), replication_id(j, r)))
            .collect();
        let mut replications = Vec::with_capacity(cfg.reps);
        let mut dropped = Vec::new();
        for (r, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Ok(rep) => replications.push(rep),
                Err(e) => dropped.push((replication_id(j, r), e.to_string())),
            }
        }
        if dropped.len() as f64 > MAX_DROP_FRACTION * cfg.reps as f64 || replications.len() < 2 {
            return Err(Error::TooManyDrops { n, dropped: dropped.len(), reps: cfg.reps });
        }
        let mises: Vec<f64> = replications.iter().map(|r| r.mise).collect();
        let (mise_mean, mise_se) = stats::mean_se(&mises);
        sizes.push(SizeSummary { n, mise_mean, mise_se, replications, dropped, elapsed: start.elapsed() });
    }
    let ns: Vec<f64> = sizes.iter().map(|s| s.n as f64).collect();
    let mises: Vec<f64> = sizes.iter().map(|s| s.mise_mean).collect();
    let fit = if ns.len() >= 3 { rate_fit(&ns, &mises).ok() } else { None };
    Ok(ExperimentReport { config: cfg.clone(), sizes, fit })
}

/// `Σ_{i>N} 2θ_i²`: the grid-free squared bias of truncating `truth` at
/// `N`, from cosine coefficients up to `max_k`.
pub fn truncation_bias(truth: &FunctionSpec, big_n: usize, max_k: usize) -> Result<f64> {
    let c = crate::funcspace::cosine_coeffs(truth, max_k, crate::funcspace::COEFF_TOL)?;
    Ok(c.theta().iter().skip(big_n + 1).map(|t| 2.0 * t * t).sum())
}
