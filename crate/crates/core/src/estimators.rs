//! Spectral estimators of the cosine coefficients of `τ²` and `σ²`, and the
//! series estimators built from them.
//!
//! With `ΔY^k_i = (Y_{i+1} − Y_i) f_k(i/n)` and `Z = D ΔY^k`:
//!
//! * `t̂_{k,0} = norm⁻¹ Σ_{i ≥ start} λ_i⁻¹ Z_i²` estimates `∫ τ² f_k²`;
//! * `ŝ_{k,0} = w Σ_{lo ≤ i ≤ hi} Z_i² − c · t̂_{k,0}` estimates `∫ σ² f_k²`.
//!
//! Since `f_k² = 1 + cos(kπx)` for `k ≥ 1`, the differences
//! `t̂_{k,0} − t̂_{0,0}` and `ŝ_{k,0} − ŝ_{0,0}` estimate the scaled cosine
//! coefficients of `τ²` and `σ²`.
//!
//! All cut-offs use the **binary** logarithm: the standard `τ²` rule starts at
//! `[n / log₂ n]` with normalizer `n − n / log₂ n` (real-valued, so the
//! normalizer and the term count differ slightly), and the standard `σ²` band
//! is `[√n]+1 ..= 2[√n]` with weight `√n` and bias constant `7π²/3`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::CosineSeries;
use crate::simulate::check_n;
use crate::spectral::{eigensum_band, DifferenceVector, Domain, SineTransform, SpectralGrid};

/// Bias constant of the standard `σ²` band, `lim √n Σ_{[√n]+1}^{2[√n]} λ_i`.
pub const STANDARD_BIAS: f64 = 7.0 * PI * PI / 3.0;

/// `f_k(x) = ψ_k(x/2)`: `1` for `k = 0`, else `√2 cos(kπx/2)`.
pub fn f_k_eval(k: usize, x: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        SQRT_2 * (k as f64 * PI * x / 2.0).cos()
    }
}

/// Which spectral range `t̂_{k,0}` averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauRule {
    /// From `[n/log₂ n]`, normalizer `n − n/log₂ n`.
    #[default]
    Standard,
    /// From `[n/2]`, normalizer `n/2`.
    Tilde,
    /// From `start`, normalizer `n − start` (the term count).
    Custom { start: usize },
}

/// Which spectral band the `σ²` estimator sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaBand {
    /// `[√n]+1 ..= 2[√n]`, weight `√n`, bias constant `7π²/3`.
    #[default]
    Standard,
    /// `lo ..= hi`, weight `n/(hi−lo+1)`, bias constant `weight · Σ λ_i`.
    Custom { lo: usize, hi: usize },
}

impl fmt::Display for TauRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauRule::Standard => f.write_str("standard"),
            TauRule::Tilde => f.write_str("tilde"),
            TauRule::Custom { start } => write!(f, "custom:{start}"),
        }
    }
}

impl fmt::Display for SigmaBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaBand::Standard => f.write_str("standard"),
            SigmaBand::Custom { lo, hi } => write!(f, "custom:{lo},{hi}"),
        }
    }
}

fn parse_index(field: &'static str, raw: &str) -> Result<usize> {
    raw.trim()
        .parse()
        .map_err(|_| Error::arg(field, format!("`{}` is not a nonnegative integer", raw.trim())))
}

impl FromStr for TauRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(TauRule::Standard),
            "tilde" => Ok(TauRule::Tilde),
            _ => match s.strip_prefix("custom:") {
                Some(start) => Ok(TauRule::Custom { start: parse_index("cutoff", start)? }),
                None => Err(Error::arg("cutoff", format!("`{s}`: expected standard|tilde|custom:start"))),
            },
        }
    }
}

impl FromStr for SigmaBand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "standard" {
            return Ok(SigmaBand::Standard);
        }
        let body = s
            .strip_prefix("custom:")
            .ok_or_else(|| Error::arg("cutoff", format!("`{s}`: expected standard|custom:lo,hi")))?;
        let (lo, hi) = body
            .split_once(',')
            .ok_or_else(|| Error::arg("cutoff", format!("`{s}`: expected custom:lo,hi")))?;
        Ok(SigmaBand::Custom { lo: parse_index("cutoff", lo)?, hi: parse_index("cutoff", hi)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CutoffConfig {
    pub tau_rule: TauRule,
    pub sigma_band: SigmaBand,
}

/// A [`CutoffConfig`] made concrete for one sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedCutoff {
    pub n: usize,
    pub config: CutoffConfig,
    pub tau_start: usize,
    pub tau_norm: f64,
    pub band_lo: usize,
    pub band_hi: usize,
    pub band_weight: f64,
    pub bias_constant: f64,
}

impl CutoffConfig {
    pub fn resolve(&self, n: usize) -> Result<ResolvedCutoff> {
        check_n(n)?;
        let nf = n as f64;
        let (tau_start, tau_norm) = match self.tau_rule {
            TauRule::Standard => {
                let q = nf / nf.log2();
                (q.floor() as usize, nf - q)
            }
            TauRule::Tilde => (n / 2, nf / 2.0),
            TauRule::Custom { start } => (start, (n.saturating_sub(start)) as f64),
        };
        if tau_start < 1 || tau_start >= n - 1 {
            return Err(Error::DegenerateCutoff(format!(
                "tau cut-off start {tau_start} must satisfy 1 ≤ start < n−1 = {}",
                n - 1
            )));
        }
        let (band_lo, band_hi, band_weight, bias_constant) = match self.sigma_band {
            SigmaBand::Standard => {
                let m = n.isqrt();
                if 2 * m > n - 1 {
                    return Err(Error::DegenerateCutoff(format!("band end 2[√n] = {} exceeds n−1", 2 * m)));
                }
                (m + 1, 2 * m, nf.sqrt(), STANDARD_BIAS)
            }
            SigmaBand::Custom { lo, hi } => {
                if lo < 1 || lo > hi || hi > n - 1 {
                    return Err(Error::DegenerateCutoff(format!(
                        "sigma band {lo}..={hi} must satisfy 1 ≤ lo ≤ hi ≤ n−1 = {}",
                        n - 1
                    )));
                }
                let w = nf / (hi - lo + 1) as f64;
                (lo, hi, w, w * eigensum_band(n, lo, hi)?)
            }
        };
        Ok(ResolvedCutoff {
            n,
            config: *self,
            tau_start,
            tau_norm,
            band_lo,
            band_hi,
            band_weight,
            bias_constant,
        })
    }
}

impl ResolvedCutoff {
    /// Key-value lines describing the resolved cut-offs.
    pub fn to_kv(&self) -> String {
        format!(
            "log_base=2\ntau_rule={}\ntau_start={}\ntau_norm={}\nsigma_band={}\nband_lo={}\nband_hi={}\nband_weight={}\nbias_constant={}\n",
            self.config.tau_rule,
            self.tau_start,
            self.tau_norm,
            self.config.sigma_band,
            self.band_lo,
            self.band_hi,
            self.band_weight,
            self.bias_constant
        )
    }

    /// `E t̂_{0,0} / τ²` for constant `τ` and no signal: term count over
    /// normalizer.
    pub fn tau_ratio(&self) -> f64 {
        (self.n - self.tau_start) as f64 / self.tau_norm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Tau,
    Sigma,
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorKind::Tau => "tau",
            EstimatorKind::Sigma => "sigma",
        })
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(EstimatorKind::Tau),
            "sigma" => Ok(EstimatorKind::Sigma),
            other => Err(Error::arg("kind", format!("unknown estimator `{other}` (tau|sigma)"))),
        }
    }
}

/// One estimated coefficient `t̂_{k,0}` or `ŝ_{k,0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientEstimate {
    pub k: usize,
    pub value: f64,
    pub kind: EstimatorKind,
    pub cutoff: ResolvedCutoff,
}

/// `ΔY^k_i = (y_{i+1} − y_i) f_k(i/n)`, `i = 1..n−1`.
pub fn difference_transform(y: &[f64], k: usize) -> DifferenceVector {
    let n = y.len();
    let values = y
        .windows(2)
        .enumerate()
        .map(|(i, w)| (w[1] - w[0]) * f_k_eval(k, (i + 1) as f64 / n as f64))
        .collect();
    DifferenceVector { values, k, domain: Domain::Time }
}

/// Estimator state for a fixed sample size: eigenvalues, transform plan and
/// resolved cut-offs. Shareable across threads.
#[derive(Debug, Clone)]
pub struct SpectralEstimator {
    grid: SpectralGrid,
    dst: SineTransform,
    cutoff: ResolvedCutoff,
}

impl SpectralEstimator {
    pub fn new(n: usize, cutoff: &CutoffConfig) -> Result<Self> {
        let cutoff = cutoff.resolve(n)?;
        Ok(Self {
            grid: SpectralGrid::new(n)?,
            dst: SineTransform::new(n - 1)?,
            cutoff,
        })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn cutoff(&self) -> &ResolvedCutoff {
        &self.cutoff
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    fn check_len(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.n() {
            return Err(Error::arg(
                "y",
                format!("{} observations for an estimator built for n = {}", y.len(), self.n()),
            ));
        }
        Ok(())
    }

    /// `Z = D ΔY^k`.
    pub fn spectrum(&self, y: &[f64], k: usize) -> Result<DifferenceVector> {
        self.check_len(y)?;
        difference_transform(y, k).transformed(&self.dst)
    }

    /// Weight vector of `t̂` (zero below the start index).
    pub fn tau_weights(&self) -> Vec<f64> {
        let c = &self.cutoff;
        self.grid
            .lambdas()
            .iter()
            .enumerate()
            .map(|(j, l)| if j + 1 >= c.tau_start { 1.0 / (l * c.tau_norm) } else { 0.0 })
            .collect()
    }

    /// Weight vector of the band term of `ŝ`.
    pub fn band_weights(&self) -> Vec<f64> {
        let c = &self.cutoff;
        (1..self.n())
            .map(|i| if (c.band_lo..=c.band_hi).contains(&i) { c.band_weight } else { 0.0 })
            .collect()
    }

    fn tau_from_spectrum(&self, z: &[f64]) -> f64 {
        let c = &self.cutoff;
        let from = c.tau_start - 1;
        z[from..]
            .iter()
            .zip(&self.grid.lambdas()[from..])
            .map(|(z, l)| z * z / l)
            .sum::<f64>()
            / c.tau_norm
    }

    fn band_from_spectrum(&self, z: &[f64]) -> f64 {
        let c = &self.cutoff;
        c.band_weight * z[c.band_lo - 1..c.band_hi].iter().map(|z| z * z).sum::<f64>()
    }

    /// The band quadratic form `w Σ_{lo..hi} Z_i²` before bias correction.
    pub fn band_term(&self, y: &[f64], k: usize) -> Result<f64> {
        Ok(self.band_from_spectrum(&self.spectrum(y, k)?.values))
    }

    pub fn t_k0(&self, y: &[f64], k: usize) -> Result<CoefficientEstimate> {
        let z = self.spectrum(y, k)?;
        Ok(CoefficientEstimate {
            k,
            value: self.tau_from_spectrum(&z.values),
            kind: EstimatorKind::Tau,
            cutoff: self.cutoff,
        })
    }

    pub fn s_k0(&self, y: &[f64], k: usize) -> Result<CoefficientEstimate> {
        let (_, s) = self.pair(y, k)?;
        Ok(CoefficientEstimate { k, value: s, kind: EstimatorKind::Sigma, cutoff: self.cutoff })
    }

    /// `(t̂_{k,0}, ŝ_{k,0})` from a single transform.
    pub fn pair(&self, y: &[f64], k: usize) -> Result<(f64, f64)> {
        let z = self.spectrum(y, k)?;
        let t = self.tau_from_spectrum(&z.values);
        let s = self.band_from_spectrum(&z.values) - self.cutoff.bias_constant * t;
        Ok((t, s))
    }

    /// `(t̂_{k,0}, ŝ_{k,0})` for `k = 0..=max_k`, computed in parallel.
    pub fn coefficient_pairs(&self, y: &[f64], max_k: usize) -> Result<Vec<(f64, f64)>> {
        self.check_len(y)?;
        (0..=max_k).into_par_iter().map(|k| self.pair(y, k)).collect()
    }

    /// `τ̂²_N`: `θ_0 = t̂_{0,0}`, `θ_i = t̂_{i,0} − t̂_{0,0}`.
    pub fn tau_series(&self, y: &[f64], big_n: usize) -> Result<CosineSeries> {
        self.check_len(y)?;
        let t: Vec<f64> = (0..=big_n)
            .into_par_iter()
            .map(|k| Ok(self.tau_from_spectrum(&self.spectrum(y, k)?.values)))
            .collect::<Result<_>>()?;
        series_from_raw(&t)
    }

    /// `σ̂²_N`: `θ_0 = ŝ_{0,0}`, `θ_i = ŝ_{i,0} − ŝ_{0,0}`.
    pub fn sigma_series(&self, y: &[f64], big_n: usize) -> Result<CosineSeries> {
        let s: Vec<f64> = self.coefficient_pairs(y, big_n)?.into_iter().map(|p| p.1).collect();
        series_from_raw(&s)
    }

    /// Both series up to `big_n` from one pass over `k`.
    pub fn both_series(&self, y: &[f64], big_n: usize) -> Result<(CosineSeries, CosineSeries)> {
        let pairs = self.coefficient_pairs(y, big_n)?;
        let t: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let s: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        Ok((series_from_raw(&t)?, series_from_raw(&s)?))
    }

    pub fn series(&self, kind: EstimatorKind, y: &[f64], big_n: usize) -> Result<CosineSeries> {
        match kind {
            EstimatorKind::Tau => self.tau_series(y, big_n),
            EstimatorKind::Sigma => self.sigma_series(y, big_n),
        }
    }
}

/// Series from raw estimates `c_0..c_N` of `∫ g f_k²`.
fn series_from_raw(raw: &[f64]) -> Result<CosineSeries> {
    let base = raw[0];
    let theta = std::iter::once(base).chain(raw[1..].iter().map(|c| c - base)).collect();
    CosineSeries::new(theta).map_err(|e| Error::Domain(format!("estimate is not finite: {e}")))
}

pub fn estimate_t_k0(y: &[f64], k: usize, cutoff: &CutoffConfig) -> Result<CoefficientEstimate> {
    SpectralEstimator::new(y.len(), cutoff)?.t_k0(y, k)
}

pub fn estimate_s_k0(y: &[f64], k: usize, cutoff: &CutoffConfig) -> Result<CoefficientEstimate> {
    SpectralEstimator::new(y.len(), cutoff)?.s_k0(y, k)
}

pub fn estimate_tau_series(y: &[f64], big_n: usize, cutoff: &CutoffConfig) -> Result<CosineSeries> {
    SpectralEstimator::new(y.len(), cutoff)?.tau_series(y, big_n)
}

pub fn estimate_sigma_series(y: &[f64], big_n: usize, cutoff: &CutoffConfig) -> Result<CosineSeries> {
    SpectralEstimator::new(y.len(), cutoff)?.sigma_series(y, big_n)
}

/// Quadratic-variation estimate `(2n)⁻¹ ‖ΔY^k‖²` of `t_{k,0}`.
pub fn quadratic_variation_t_k0(y: &[f64], k: usize) -> f64 {
    let d = difference_transform(y, k);
    d.values.iter().map(|v| v * v).sum::<f64>() / (2.0 * y.len() as f64)
}

/// Warnings when `N` exceeds the growth the convergence theory allows:
/// `N ≤ √n / log₂ n` for `τ²`, `N ≤ n^{1/4}` for `σ²`.
pub fn advisory_warnings(kind: EstimatorKind, n: usize, big_n: usize) -> Vec<String> {
    let nf = n as f64;
    let (limit, rule) = match kind {
        EstimatorKind::Tau => (nf.sqrt() / nf.log2(), "√n / log₂ n"),
        EstimatorKind::Sigma => (nf.powf(0.25), "n^{1/4}"),
    };
    if big_n as f64 > limit {
        vec![format!(
            "N = {big_n} exceeds {rule} = {limit:.2} for n = {n}; the {kind} series may be variance dominated"
        )]
    } else {
        Vec::new()
    }
}

/// Squared grid errors `(1/n) Σ_i (est_N(i/n) − truth_i)²` for every
/// truncation `N = 0..=series.max_index()`; `truth` holds values at `i/n`,
/// `i = 1..=n`.
pub fn truncation_errors(series: &CosineSeries, truth: &[f64]) -> Vec<f64> {
    let n = truth.len();
    let theta = series.theta();
    let mut est = vec![theta[0]; n];
    let mse = |est: &[f64]| est.iter().zip(truth).map(|(e, t)| (e - t).powi(2)).sum::<f64>() / n as f64;
    let mut out = vec![mse(&est)];
    for (k, th) in theta.iter().enumerate().skip(1) {
        for (i, e) in est.iter_mut().enumerate() {
            *e += 2.0 * th * (k as f64 * PI * (i + 1) as f64 / n as f64).cos();
        }
        out.push(mse(&est));
    }
    out
}

/// Index of the smallest error; ties go to the smaller index.
pub fn argmin_first(errors: &[f64]) -> usize {
    let mut best = 0;
    for (i, e) in errors.iter().enumerate() {
        if *e < errors[best] {
            best = i;
        }
    }
    best
}

/// Truncation level minimizing the empirical grid error against a known
/// truth (simulation only).
pub fn oracle_threshold(
    y: &[f64],
    truth: &crate::funcspace::FunctionSpec,
    kind: EstimatorKind,
    n_max: usize,
    cutoff: &CutoffConfig,
) -> Result<usize> {
    let est = SpectralEstimator::new(y.len(), cutoff)?;
    let series = est.series(kind, y, n_max)?;
    Ok(argmin_first(&truncation_errors(&series, &truth.eval_grid(y.len()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{stream_rng, StreamRole};
    use crate::spectral::oracle::{dst_matrix, Dense};
    use rand_distr::{Distribution, StandardNormal};

    fn random_y(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, 0, StreamRole::Noise);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn f_k_examples() {
        assert_eq!(f_k_eval(0, 0.37), 1.0);
        assert_eq!(f_k_eval(1, 0.0), SQRT_2);
        for k in 1..=8 {
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let lhs = f_k_eval(k, x).powi(2);
                assert!((lhs - (1.0 + (k as f64 * PI * x).cos())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn difference_examples() {
        let d = difference_transform(&[3.0; 20], 2);
        assert!(d.values.iter().all(|v| *v == 0.0));
        let mut y = vec![0.0; 20];
        y[1] = 1.0;
        let d = difference_transform(&y, 0);
        assert_eq!(&d.values[..3], &[1.0, -1.0, 0.0]);
        assert_eq!(d.len(), 19);

        let y = random_y(10, 4);
        let d = difference_transform(&y, 2);
        for i in 1..10 {
            let x = i as f64 / 10.0;
            let want = (y[i] - y[i - 1]) * SQRT_2 * (2.0 * PI * x / 2.0).cos();
            assert!((d.values[i - 1] - want).abs() < 1e-14);
        }
    }

    #[test]
    fn cutoff_resolution() {
        let c = CutoffConfig::default().resolve(25_000).unwrap();
        let q = 25_000.0 / 25_000f64.log2();
        assert_eq!(c.tau_start, q.floor() as usize);
        assert!((c.tau_norm - (25_000.0 - q)).abs() < 1e-9);
        assert_eq!((c.band_lo, c.band_hi), (159, 316));
        assert_eq!(c.bias_constant, STANDARD_BIAS);

        let tilde = CutoffConfig { tau_rule: TauRule::Tilde, ..Default::default() }.resolve(101).unwrap();
        assert_eq!((tilde.tau_start, tilde.tau_norm), (50, 50.5));

        let custom = CutoffConfig { sigma_band: SigmaBand::Custom { lo: 5, hi: 20 }, ..Default::default() }
            .resolve(400)
            .unwrap();
        assert_eq!(custom.band_weight, 25.0);
        assert!((custom.bias_constant - 25.0 * eigensum_band(400, 5, 20).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cutoffs() {
        let bad_start = CutoffConfig { tau_rule: TauRule::Custom { start: 99 }, ..Default::default() };
        assert!(matches!(bad_start.resolve(100), Err(Error::DegenerateCutoff(_))));
        let bad_band = CutoffConfig { sigma_band: SigmaBand::Custom { lo: 10, hi: 100 }, ..Default::default() };
        assert!(matches!(bad_band.resolve(100), Err(Error::DegenerateCutoff(_))));
        assert!(CutoffConfig::default().resolve(16).unwrap_err().to_string().contains("n must exceed 16"));
    }

    #[test]
    fn cutoff_parsing() {
        assert_eq!("tilde".parse::<TauRule>().unwrap(), TauRule::Tilde);
        assert_eq!("custom:40".parse::<TauRule>().unwrap(), TauRule::Custom { start: 40 });
        assert_eq!("custom:3,9".parse::<SigmaBand>().unwrap(), SigmaBand::Custom { lo: 3, hi: 9 });
        assert!("custom:x".parse::<TauRule>().is_err());
        assert!("wide".parse::<SigmaBand>().is_err());
        for r in [TauRule::Standard, TauRule::Tilde, TauRule::Custom { start: 7 }] {
            assert_eq!(r.to_string().parse::<TauRule>().unwrap(), r);
        }
    }

    #[test]
    fn zero_observations_give_zero() {
        let y = vec![0.0; 64];
        let cfg = CutoffConfig::default();
        assert_eq!(estimate_t_k0(&y, 0, &cfg).unwrap().value, 0.0);
        assert_eq!(estimate_s_k0(&y, 3, &cfg).unwrap().value, 0.0);
        let s = estimate_tau_series(&y, 0, &cfg).unwrap();
        assert_eq!(s.theta(), &[0.0]);
    }

    #[test]
    fn quadratic_scaling() {
        let y = random_y(300, 8);
        let y2: Vec<f64> = y.iter().map(|v| 2.0 * v).collect();
        let y3: Vec<f64> = y.iter().map(|v| 0.37 * v).collect();
        let est = SpectralEstimator::new(300, &CutoffConfig::default()).unwrap();
        for k in [0, 1, 5] {
            let (t, s) = est.pair(&y, k).unwrap();
            let (t2, s2) = est.pair(&y2, k).unwrap();
            assert_eq!(t2, 4.0 * t);
            assert_eq!(s2, 4.0 * s);
            assert_eq!(est.band_term(&y2, k).unwrap(), 4.0 * est.band_term(&y, k).unwrap());
            let (t3, s3) = est.pair(&y3, k).unwrap();
            assert!((t3 - 0.37f64.powi(2) * t).abs() <= 1e-12 * t.abs());
            assert!((s3 - 0.37f64.powi(2) * s).abs() <= 1e-12 * s.abs().max(t.abs()));
        }
    }

    fn dense_form(y: &[f64], k: usize, weights: &[f64]) -> f64 {
        // (ΔY)^t D J D (ΔY) with J = diag(weights), all dense
        let n = y.len();
        let d = dst_matrix(n).unwrap();
        let djd: Dense = d.scale_columns(weights).mul(&d);
        let dy = difference_transform(y, k).values;
        let m = djd.mul_vec(&dy);
        dy.iter().zip(&m).map(|(a, b)| a * b).sum()
    }

    #[test]
    fn matrix_and_spectral_forms_agree() {
        for (n, seed) in [(17usize, 1u64), (100, 2), (256, 3)] {
            let y = random_y(n, seed);
            let est = SpectralEstimator::new(n, &CutoffConfig::default()).unwrap();
            for k in [0, 2, 7] {
                let t = est.t_k0(&y, k).unwrap().value;
                let t_dense = dense_form(&y, k, &est.tau_weights());
                assert!((t - t_dense).abs() <= 1e-12 * t.abs().max(1.0), "n = {n}, k = {k}");
                let b = est.band_term(&y, k).unwrap();
                let b_dense = dense_form(&y, k, &est.band_weights());
                assert!((b - b_dense).abs() <= 1e-12 * b.abs().max(1.0), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn series_assembly() {
        let y = random_y(400, 12);
        let est = SpectralEstimator::new(400, &CutoffConfig::default()).unwrap();
        let s = est.sigma_series(&y, 4).unwrap();
        let s0 = est.s_k0(&y, 0).unwrap().value;
        for k in 1..=4 {
            let sk = est.s_k0(&y, k).unwrap().value;
            assert!((s.theta()[k] - (sk - s0)).abs() < 1e-15);
        }
        assert_eq!(s.theta()[0], s0);
        let t = est.tau_series(&y, 0).unwrap();
        assert_eq!(t.theta(), &[est.t_k0(&y, 0).unwrap().value]);
        let (tb, sb) = est.both_series(&y, 4).unwrap();
        assert_eq!(sb, s);
        assert_eq!(tb.truncated(0), t);
    }

    #[test]
    fn length_mismatch() {
        let est = SpectralEstimator::new(100, &CutoffConfig::default()).unwrap();
        assert!(est.t_k0(&[0.0; 99], 0).is_err());
    }

    #[test]
    fn oracle_prefers_constant_when_extra_terms_are_noise() {
        let truth = vec![2.0; 500];
        let s = CosineSeries::new(vec![2.0, 0.01, -0.02, 0.005]).unwrap();
        let errs = truncation_errors(&s, &truth);
        assert_eq!(errs[0], 0.0);
        assert_eq!(argmin_first(&errs), 0);
        assert_eq!(argmin_first(&[1.0, 0.5, 0.5, 0.7]), 1);
    }

    #[test]
    fn truncation_errors_match_direct() {
        let s = CosineSeries::new(vec![1.0, 0.3, -0.2]).unwrap();
        let truth: Vec<f64> = (1..=50).map(|i| (i as f64 / 50.0).sin()).collect();
        let errs = truncation_errors(&s, &truth);
        for (n, err) in errs.iter().enumerate() {
            let est = s.truncated(n).eval_grid(50);
            let want: f64 = est.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 50.0;
            assert!((err - want).abs() < 1e-13);
        }
    }

    #[test]
    fn advisory_bounds() {
        assert!(advisory_warnings(EstimatorKind::Sigma, 10_000, 10).is_empty());
        assert_eq!(advisory_warnings(EstimatorKind::Sigma, 10_000, 11).len(), 1);
        assert!(advisory_warnings(EstimatorKind::Tau, 25_000, 10).is_empty());
        assert_eq!(advisory_warnings(EstimatorKind::Tau, 25_000, 11).len(), 1);
    }
}
