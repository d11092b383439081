//! Dense-matrix checks of the spectral identities. Everything here
//! materializes `(n−1)×(n−1)` matrices and refuses `n > 512`.

use std::f64::consts::PI;

use super::{build_k, eigenvalue};
use crate::error::{Error, Result};
use crate::funcspace::{aliased_sum, cosine_coeffs, CosineSeries, UnitFunction, COEFF_TOL};

pub const MAX_DENSE_N: usize = 512;

pub(crate) fn check_dense_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_N {
        return Err(Error::arg("n", format!("dense oracle capped at n ≤ {MAX_DENSE_N}, got {n}")));
    }
    Ok(())
}

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    dim: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let d = self.dim;
        let mut out = Dense::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    /// `self · diag(w)`.
    pub fn scale_columns(&self, w: &[f64]) -> Dense {
        Dense::from_fn(self.dim, |i, j| self.get(i, j) * w[j])
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data.chunks(self.dim).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn max_abs_diff(&self, other: &Dense) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `D_{n−1}` with entries `√(2/n) sin(ijπ/n)`.
pub fn dst_matrix(n: usize) -> Result<Dense> {
    if n < 2 {
        return Err(Error::arg("n", format!("need n ≥ 2, got {n}")));
    }
    check_dense_size(n)?;
    let c = (2.0 / n as f64).sqrt();
    Ok(Dense::from_fn(n - 1, |i, j| {
        c * (((i + 1) * (j + 1)) as f64 * PI / n as f64).sin()
    }))
}

/// `D v` by the O(n²) matrix product.
pub fn naive_dst(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::arg("v", "sine transform of an empty vector"));
    }
    Ok(dst_matrix(v.len() + 1)?.mul_vec(v))
}

/// `max |(D Λ D − K)_{ij}|`.
pub fn diagonalization_residual(n: usize) -> Result<f64> {
    let d = dst_matrix(n)?;
    let lambdas: Vec<f64> = (1..n).map(|i| eigenvalue(i, n)).collect();
    let dld = d.scale_columns(&lambdas).mul(&d);
    let k = build_k(n)?.to_dense()?;
    Ok(dld.max_abs_diff(&k))
}

/// Coefficients `s_{k,p}`, `p = 0..=max_p`, of `σ² f_k²` from the
/// coefficients `s_{0,·}` of `σ²`. With `f_k² = 1 + cos(kπx)` for `k ≥ 1`,
/// `s_{k,p} = s_{0,p} + ½ s_{0,|p−k|} + ½ s_{0,p+k}`.
pub fn modulated_coeffs(base: &CosineSeries, k: usize, max_p: usize) -> CosineSeries {
    let s = |q: usize| base.theta().get(q).copied().unwrap_or(0.0);
    let theta = (0..=max_p)
        .map(|p| {
            if k == 0 {
                s(p)
            } else {
                s(p) + 0.5 * s(p.abs_diff(k)) + 0.5 * s(p + k)
            }
        })
        .collect();
    CosineSeries::new(theta).expect("finite coefficients")
}

/// `max |(D Σ_k² D)_{ij} − (A(σ_k², i−j) − A(σ_k², i+j))|` with
/// `Σ_k = diag(σ_k(i/n))`, `σ_k² = σ² f_k²`, aliasing sums truncated at `8n`.
pub fn aliasing_identity_residual<F: UnitFunction + ?Sized>(sigma2: &F, k: usize, n: usize) -> Result<f64> {
    let d = dst_matrix(n)?;
    let trunc = 8 * n;
    let base = cosine_coeffs(sigma2, trunc + k, COEFF_TOL)?;
    let coeffs = modulated_coeffs(&base, k, trunc);
    let diag: Vec<f64> = (1..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            sigma2.eval(x) * crate::estimators::f_k_eval(k, x).powi(2)
        })
        .collect();
    let direct = d.scale_columns(&diag).mul(&d);
    let mut worst: f64 = 0.0;
    for i in 1..n {
        for j in 1..n {
            let a = aliased_sum(&coeffs, i as i64 - j as i64, n, trunc)?
                - aliased_sum(&coeffs, (i + j) as i64, n, trunc)?;
            worst = worst.max((direct.get(i - 1, j - 1) - a).abs());
        }
    }
    Ok(worst)
}
