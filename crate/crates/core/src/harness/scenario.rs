//! Named simulation scenarios.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::funcspace::FunctionSpec;
use crate::simulate::{random_sigma2_path, Model, NoiseLaw, ObservationSeries, Simulator};

/// Where a scenario's `σ²` comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSource {
    Fixed(FunctionSpec),
    /// `σ = scale · |W̃|` with `W̃` drawn per replication.
    BrownianPath { scale: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub model: Model,
    pub noise: NoiseLaw,
    pub sigma2: SigmaSource,
    pub tau2: FunctionSpec,
}

/// Catalog entries accepted by [`Scenario::by_name`].
pub const SCENARIO_NAMES: [&str; 10] = [
    "fig2",
    "fig2-lownoise",
    "fig3",
    "fig4",
    "fig5",
    "const-sigma",
    "const-tau",
    "rate-tau",
    "rate-sigma",
    "null",
];

fn spec(flag: &str) -> FunctionSpec {
    FunctionSpec::from_flag(flag).expect("catalog specs are valid")
}

impl Scenario {
    pub fn new(name: impl Into<String>, model: Model, noise: NoiseLaw, sigma2: SigmaSource, tau2: FunctionSpec) -> Self {
        Self { name: name.into(), model, noise, sigma2, tau2 }
    }

    /// Looks up a catalog scenario.
    ///
    /// * `fig2`: tBM, `σ² = 2 + cos 2πt`, `τ = 0.1`, Gaussian noise;
    /// * `fig2-lownoise`: as `fig2` with `τ = 0.01`;
    /// * `fig3`: as `fig2` with `t(3)/√3` noise;
    /// * `fig4`: as `fig2` with `σ = 3|W̃|`;
    /// * `fig5`: as `fig2` with `σ = 1 + 𝟙(1/2, 1]`;
    /// * `const-sigma`: `σ² = 4`, `τ = 0.01`;
    /// * `const-tau`: `σ = 0`, `τ = 0.1`;
    /// * `rate-tau`: `τ² = (1 + ½ cos πx)·10⁻²`, `σ² = 2 + cos 2πx`;
    /// * `rate-sigma`: `σ² = 2 + cos 2πx`, `τ = 0.1`;
    /// * `null`: `σ = τ = 0`.
    pub fn by_name(name: &str) -> Result<Self> {
        let fig2_sigma = SigmaSource::Fixed(spec("cos:2,0,0.5"));
        let tau01 = spec("const:0.01");
        let (noise, sigma2, tau2) = match name {
            "fig2" | "rate-sigma" => (NoiseLaw::Gaussian, fig2_sigma, tau01),
            "fig2-lownoise" => (NoiseLaw::Gaussian, fig2_sigma, spec("const:1e-4")),
            "fig3" => (NoiseLaw::StudentT3, fig2_sigma, tau01),
            "fig4" => (NoiseLaw::Gaussian, SigmaSource::BrownianPath { scale: 3.0 }, tau01),
            "fig5" => (NoiseLaw::Gaussian, SigmaSource::Fixed(spec("jump:1,4,0.5")), tau01),
            "const-sigma" => (NoiseLaw::Gaussian, SigmaSource::Fixed(spec("const:4")), spec("const:1e-4")),
            "const-tau" => (NoiseLaw::Gaussian, SigmaSource::Fixed(spec("const:0")), tau01),
            "rate-tau" => (NoiseLaw::Gaussian, fig2_sigma, spec("cos:0.01,0.0025")),
            "null" => (NoiseLaw::Gaussian, SigmaSource::Fixed(spec("const:0")), spec("const:0")),
            other => {
                return Err(Error::arg(
                    "scenario",
                    format!("unknown scenario `{other}`; known: {}", SCENARIO_NAMES.join(", ")),
                ))
            }
        };
        Ok(Self::new(name, Model::Tbm, noise, sigma2, tau2))
    }

    /// `σ²` for one replication.
    pub fn sigma2_for(&self, seed: u64, replication: u64, n: usize) -> Result<FunctionSpec> {
        match &self.sigma2 {
            SigmaSource::Fixed(f) => Ok(f.clone()),
            SigmaSource::BrownianPath { scale } => random_sigma2_path(seed, replication, n, *scale),
        }
    }

    /// Simulator for a fixed `σ²`; `None` when `σ²` is drawn per replication.
    pub fn fixed_simulator(&self, n: usize) -> Result<Option<Simulator>> {
        match &self.sigma2 {
            SigmaSource::Fixed(f) => {
                Simulator::new(self.model, f.clone(), self.tau2.clone(), self.noise, n).map(Some)
            }
            SigmaSource::BrownianPath { .. } => Ok(None),
        }
    }

    /// One replication: observations plus its `σ²`.
    pub fn observe(&self, n: usize, seed: u64, replication: u64) -> Result<ObservationSeries> {
        let sigma2 = self.sigma2_for(seed, replication, n)?;
        Ok(Simulator::new(self.model, sigma2, self.tau2.clone(), self.noise, n)?.observe(seed, replication))
    }

    pub fn truth<'a>(&'a self, obs: &'a ObservationSeries, kind: EstimatorKind) -> &'a FunctionSpec {
        match kind {
            EstimatorKind::Tau => &self.tau2,
            EstimatorKind::Sigma => &obs.sigma2,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::by_name(s)
    }
}
