//! Summary statistics for Monte Carlo output.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Mean and standard error of the mean.
pub fn mean_se(x: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    if x.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Unbiased sample variance.
pub fn sample_variance(x: &[f64]) -> f64 {
    let (mean, _) = mean_se(x);
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Most frequent value; ties go to the smaller value.
pub fn mode(x: &[usize]) -> Option<usize> {
    let mut counts = std::collections::BTreeMap::new();
    for v in x {
        *counts.entry(*v).or_insert(0usize) += 1;
    }
    let best = counts.values().copied().max()?;
    counts.into_iter().find(|(_, c)| *c == best).map(|(v, _)| v)
}

/// `(1/n) Σ (a_i − b_i)²`.
pub fn grid_mse(est: &[f64], truth: &[f64]) -> f64 {
    est.iter().zip(truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / truth.len() as f64
}

/// `‖est − truth‖ / ‖truth‖` on a common grid.
pub fn relative_l2(est: &[f64], truth: &[f64]) -> f64 {
    let num: f64 = est.iter().zip(truth).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = truth.iter().map(|b| b * b).sum();
    (num / den).sqrt()
}

/// Ordinary least squares fit of `log MISE` on `log n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% confidence interval for the slope.
    pub ci: (f64, f64),
    pub residuals: Vec<f64>,
}

pub fn rate_fit(ns: &[f64], mises: &[f64]) -> Result<RateFit> {
    if ns.len() != mises.len() {
        return Err(Error::arg("mises", format!("{} sizes but {} errors", ns.len(), mises.len())));
    }
    if ns.len() < 3 {
        return Err(Error::arg("ns", format!("rate fit needs at least 3 points, got {}", ns.len())));
    }
    if let Some(bad) = mises.iter().find(|m| m.is_nan() || **m <= 0.0) {
        return Err(Error::arg("mises", format!("log-log fit needs positive errors, got {bad}")));
    }
    if let Some(bad) = ns.iter().find(|n| n.is_nan() || **n <= 0.0) {
        return Err(Error::arg("ns", format!("log-log fit needs positive sizes, got {bad}")));
    }
    let x: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let y: Vec<f64> = mises.iter().map(|m| m.ln()).collect();
    let m = x.len() as f64;
    let xm = x.iter().sum::<f64>() / m;
    let ym = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - xm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::arg("ns", "rate fit needs at least two distinct sizes"));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let residuals: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - intercept - slope * a).collect();
    let df = m - 2.0;
    let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / df;
    let q = StudentsT::new(0.0, 1.0, df).expect("df ≥ 1").inverse_cdf(0.975);
    let half = q * (s2 / sxx).sqrt();
    Ok(RateFit { slope, intercept, ci: (slope - half, slope + half), residuals })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityCheck {
    pub skew: f64,
    pub exkurt: f64,
    pub pass: bool,
}

pub const NORMALITY_MIN_SAMPLES: usize = 500;

/// Sample skewness and excess kurtosis (moment estimators); passes when
/// `|skew| ≤ 0.15` and `|exkurt| ≤ 0.3`.
pub fn normality_check(samples: &[f64]) -> Result<NormalityCheck> {
    if samples.len() < NORMALITY_MIN_SAMPLES {
        return Err(Error::arg(
            "samples",
            format!("need at least {NORMALITY_MIN_SAMPLES} samples, got {}", samples.len()),
        ));
    }
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / m, m3 / m, m4 / m);
    let skew = m3 / m2.powf(1.5);
    let exkurt = m4 / (m2 * m2) - 3.0;
    Ok(NormalityCheck { skew, exkurt, pass: skew.abs() <= 0.15 && exkurt.abs() <= 0.3 })
}
