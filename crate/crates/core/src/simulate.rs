//! Exact-law simulation of noisy time- and space-transformed Brownian motion.
//!
//! * tBM: `Y_i = ∫_0^{i/n} σ(s) dW_s + τ(i/n) ε_i`
//! * sBM: `Y_i = σ(i/n) W_{i/n} + τ(i/n) ε_i`
//!
//! Both are parameterized by the variance functions `σ²` and `τ²`; `σ` and
//! `τ` are their pointwise nonnegative square roots.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::funcspace::FunctionSpec;

/// Smallest admissible sample size is `MIN_N + 1`.
pub const MIN_N: usize = 16;

pub fn check_n(n: usize) -> Result<()> {
    if n <= MIN_N {
        return Err(Error::arg("n", format!("n must exceed {MIN_N}, got {n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Time-transformed Brownian motion `∫ σ dW`.
    Tbm,
    /// Space-transformed Brownian motion `σ(t) W_t`.
    Sbm,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Tbm => "tbm",
            Model::Sbm => "sbm",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tbm" => Ok(Model::Tbm),
            "sbm" => Ok(Model::Sbm),
            other => Err(Error::arg("model", format!("unknown model `{other}` (tbm|sbm)"))),
        }
    }
}

/// Law of the standardized microstructure noise `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseLaw {
    Gaussian,
    /// `t(3)/√3`: mean 0, variance 1, infinite fourth moment.
    StudentT3,
}

impl NoiseLaw {
    pub fn sampler(self) -> NoiseSampler {
        match self {
            NoiseLaw::Gaussian => NoiseSampler::Gaussian,
            NoiseLaw::StudentT3 => NoiseSampler::StudentT(StudentT::new(3.0).expect("valid dof")),
        }
    }
}

impl fmt::Display for NoiseLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseLaw::Gaussian => "gaussian",
            NoiseLaw::StudentT3 => "t3",
        })
    }
}

impl FromStr for NoiseLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(NoiseLaw::Gaussian),
            "t3" | "student-t3" | "student_t3_normalized" => Ok(NoiseLaw::StudentT3),
            other => Err(Error::arg("noise", format!("unknown noise law `{other}` (gaussian|t3)"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum NoiseSampler {
    Gaussian,
    StudentT(StudentT<f64>),
}

impl Distribution<f64> for NoiseSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseSampler::Gaussian => StandardNormal.sample(rng),
            NoiseSampler::StudentT(t) => t.sample(rng) / 3f64.sqrt(),
        }
    }
}

/// Independent random streams of one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    Brownian = 0,
    Noise = 1,
    SigmaPath = 2,
}

/// ChaCha stream keyed by `(seed, replication, role)`.
pub fn stream_rng(seed: u64, replication: u64, role: StreamRole) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replication.to_le_bytes());
    key[16..24].copy_from_slice(&(role as u64).to_le_bytes());
    key[24..].copy_from_slice(b"spotvol\0");
    ChaCha8Rng::from_seed(key)
}

/// `∫_{(i−1)/n}^{i/n} σ²(s) ds`, `i = 1..=n`.
pub fn increment_variances(sigma2: &FunctionSpec, n: usize) -> Result<Vec<f64>> {
    sigma2.check_nonnegative(n, "sigma2")?;
    let h = 1.0 / n as f64;
    (1..=n)
        .map(|i| {
            let v = sigma2.integral((i - 1) as f64 * h, i as f64 * h);
            // cosine series can dip below zero between grid points
            if v < 0.0 {
                Err(Error::Domain(format!("sigma2 integrates to {v} on interval {i}")))
            } else {
                Ok(v)
            }
        })
        .collect()
}

/// Independent increments `X_{i/n} − X_{(i−1)/n}` of `∫ σ dW`.
pub fn simulate_tbm_increments<R: Rng + ?Sized>(sigma2: &FunctionSpec, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_n(n)?;
    let var = increment_variances(sigma2, n)?;
    Ok(gaussian_increments(&var, rng))
}

fn gaussian_increments<R: Rng + ?Sized>(var: &[f64], rng: &mut R) -> Vec<f64> {
    var.iter()
        .map(|v| {
            let z: f64 = StandardNormal.sample(rng);
            v.sqrt() * z
        })
        .collect()
}

fn cumsum(v: &mut [f64]) {
    let mut acc = 0.0;
    for x in v.iter_mut() {
        acc += *x;
        *x = acc;
    }
}

fn sqrt_grid(f: &FunctionSpec, n: usize) -> Result<Vec<f64>> {
    (1..=n).map(|i| f.sqrt_at(i as f64 / n as f64)).collect()
}

/// `σ(i/n) W_{i/n}`, `i = 1..=n`.
pub fn simulate_sbm<R: Rng + ?Sized>(sigma2: &FunctionSpec, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_n(n)?;
    let sigma = sqrt_grid(sigma2, n)?;
    Ok(sbm_path(&sigma, rng))
}

fn sbm_path<R: Rng + ?Sized>(sigma: &[f64], rng: &mut R) -> Vec<f64> {
    let n = sigma.len();
    let mut w = gaussian_increments(&vec![1.0 / n as f64; n], rng);
    cumsum(&mut w);
    w.iter().zip(sigma).map(|(w, s)| s * w).collect()
}

/// `E(X_t − X_s)²` for `X_t = σ(t) W_t`.
pub fn variogram_sbm(s: f64, t: f64, sigma2: &FunctionSpec) -> Result<f64> {
    for (name, v) in [("s", s), ("t", t)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::arg(name, format!("{v} is outside [0, 1]")));
        }
    }
    let (ss, st) = (sigma2.sqrt_at(s)?, sigma2.sqrt_at(t)?);
    let a = st * t.sqrt() - ss * s.sqrt();
    let b = (s - t).abs() - (s.sqrt() - t.sqrt()).powi(2);
    Ok(a * a + st * ss * b)
}

/// Observations together with the latent path and everything needed to
/// regenerate them.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSeries {
    pub y: Vec<f64>,
    /// `X_{i/n}` without noise.
    pub latent: Vec<f64>,
    pub model: Model,
    pub noise: NoiseLaw,
    pub seed: u64,
    pub replication: u64,
    pub sigma2: FunctionSpec,
    pub tau2: FunctionSpec,
}

impl ObservationSeries {
    pub fn n(&self) -> usize {
        self.y.len()
    }
}

/// Precomputed per-`n` quantities for repeated draws from one configuration.
#[derive(Debug, Clone)]
pub struct Simulator {
    model: Model,
    noise: NoiseLaw,
    sigma2: FunctionSpec,
    tau2: FunctionSpec,
    /// tBM: increment variances; sBM: `σ(i/n)`.
    path_grid: Vec<f64>,
    tau: Vec<f64>,
}

impl Simulator {
    pub fn new(model: Model, sigma2: FunctionSpec, tau2: FunctionSpec, noise: NoiseLaw, n: usize) -> Result<Self> {
        check_n(n)?;
        let path_grid = match model {
            Model::Tbm => increment_variances(&sigma2, n)?,
            Model::Sbm => {
                sigma2.check_nonnegative(n, "sigma2")?;
                sqrt_grid(&sigma2, n)?
            }
        };
        tau2.check_nonnegative(n, "tau2")?;
        let tau = sqrt_grid(&tau2, n)?;
        Ok(Self { model, noise, sigma2, tau2, path_grid, tau })
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    /// Latent path only, from the Brownian stream of `(seed, replication)`.
    pub fn latent(&self, seed: u64, replication: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, replication, StreamRole::Brownian);
        match self.model {
            Model::Tbm => {
                let mut x = gaussian_increments(&self.path_grid, &mut rng);
                cumsum(&mut x);
                x
            }
            Model::Sbm => sbm_path(&self.path_grid, &mut rng),
        }
    }

    pub fn observe(&self, seed: u64, replication: u64) -> ObservationSeries {
        let latent = self.latent(seed, replication);
        let mut rng = stream_rng(seed, replication, StreamRole::Noise);
        let sampler = self.noise.sampler();
        let y = latent
            .iter()
            .zip(&self.tau)
            .map(|(x, tau)| {
                let eps: f64 = sampler.sample(&mut rng);
                x + tau * eps
            })
            .collect();
        ObservationSeries {
            y,
            latent,
            model: self.model,
            noise: self.noise,
            seed,
            replication,
            sigma2: self.sigma2.clone(),
            tau2: self.tau2.clone(),
        }
    }
}

/// One observation series from `(model, σ², τ², noise, n, seed)`.
pub fn observe(
    model: Model,
    sigma2: &FunctionSpec,
    tau2: &FunctionSpec,
    noise: NoiseLaw,
    n: usize,
    seed: u64,
) -> Result<ObservationSeries> {
    Ok(Simulator::new(model, sigma2.clone(), tau2.clone(), noise, n)?.observe(seed, 0))
}

/// `3|W̃_{i/n}|` squared on the grid `i/n`, `i = 0..=n`, frozen as a
/// tabulated variance function; `W̃` comes from the σ-path stream.
pub fn random_sigma2_path(seed: u64, replication: u64, n: usize, scale: f64) -> Result<FunctionSpec> {
    let mut rng = stream_rng(seed, replication, StreamRole::SigmaPath);
    let mut w = vec![0.0];
    w.extend(gaussian_increments(&vec![1.0 / n as f64; n], &mut rng));
    cumsum(&mut w);
    FunctionSpec::tabulated(w.iter().map(|w| (scale * w.abs()).powi(2)).collect())
}
