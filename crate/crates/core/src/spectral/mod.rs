//! Sine-transform diagonalization of the MA(1) difference covariance.
//!
//! For `n` observations the `n−1` first differences of i.i.d. noise have
//! covariance `K` (tridiagonal, 2 on the diagonal, −1 beside it). With the
//! orthogonal, involutory matrix `D_{ij} = √(2/n) sin(ijπ/n)` one has
//! `K = D Λ D` where `Λ = diag(λ_i)`, `λ_i = 4 sin²(iπ/(2n))`.
//!
//! Spectral indices are 1-based (`i = 1..n−1`) in this module's API and
//! messages.

pub mod oracle;

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// `λ_i = 4 sin²(iπ/(2n))`.
#[inline]
pub fn eigenvalue(i: usize, n: usize) -> f64 {
    let s = (i as f64 * PI / (2.0 * n as f64)).sin();
    4.0 * s * s
}

/// Eigenvalues `λ_1 < … < λ_{n−1}` of `K` for sample size `n`.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    n: usize,
    lambdas: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::arg("n", format!("need n ≥ 2, got {n}")));
        }
        let lambdas = (1..n).map(|i| eigenvalue(i, n)).collect();
        Ok(Self { n, lambdas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `λ_i`, `i` 1-based.
    pub fn lambda(&self, i: usize) -> f64 {
        self.lambdas[i - 1]
    }

    /// All eigenvalues; entry `j` holds `λ_{j+1}`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// `Σ_{i=lo}^{hi} λ_i` (1-based, inclusive).
pub fn eigensum_band(n: usize, lo: usize, hi: usize) -> Result<f64> {
    if n < 2 || lo < 1 || lo > hi || hi > n - 1 {
        return Err(Error::arg(
            "band",
            format!("need 1 ≤ lo ≤ hi ≤ n−1, got lo = {lo}, hi = {hi}, n = {n}"),
        ));
    }
    Ok((lo..=hi).map(|i| eigenvalue(i, n)).sum())
}

/// Whether a [`DifferenceVector`] holds time-domain differences or their
/// sine transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Time,
    Spectral,
}

/// Modulated first differences `ΔY^k` (time domain) or `Z = D ΔY^k`
/// (spectral domain), length `n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceVector {
    pub values: Vec<f64>,
    pub k: usize,
    pub domain: Domain,
}

impl DifferenceVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Applies `D`; since `D² = I` this also maps spectral back to time.
    pub fn transformed(&self, dst: &SineTransform) -> Result<Self> {
        Ok(Self {
            values: dst.apply(&self.values)?,
            k: self.k,
            domain: match self.domain {
                Domain::Time => Domain::Spectral,
                Domain::Spectral => Domain::Time,
            },
        })
    }
}

/// Fast `v ↦ D v` for vectors of length `n−1`, through an FFT of the odd
/// extension of length `2n`.
///
/// The plan is immutable and can be shared across threads; each call uses
/// its own buffers.
#[derive(Clone)]
pub struct SineTransform {
    len: usize,
    fft: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for SineTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SineTransform").field("len", &self.len).finish()
    }
}

impl SineTransform {
    /// Plan for vectors of length `len = n − 1`.
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::arg("v", "sine transform of an empty vector"));
        }
        let n = len + 1;
        let fft = FftPlanner::new().plan_fft_forward(2 * n);
        Ok(Self {
            len,
            fft,
            scale: 1.0 / (2.0 * n as f64).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        if v.len() != self.len || out.len() != self.len {
            return Err(Error::arg(
                "v",
                format!("length {} does not match transform length {}", v.len(), self.len),
            ));
        }
        let n = self.len + 1;
        let mut buf = vec![Complex::new(0.0, 0.0); 2 * n];
        for (j, &x) in v.iter().enumerate() {
            buf[j + 1].re = x;
            buf[2 * n - j - 1].re = -x;
        }
        self.fft.process(&mut buf);
        // X_i = -2i Σ_j v_j sin(ijπ/n)
        for (o, x) in out.iter_mut().zip(&buf[1..n]) {
            *o = -x.im * self.scale;
        }
        Ok(())
    }
}

/// `D v` for a vector of length `n − 1`.
pub fn dst_apply(v: &[f64]) -> Result<Vec<f64>> {
    SineTransform::new(v.len())?.apply(v)
}

/// The tridiagonal matrix `K_{n−1}` in banded storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i - 1],
            1 => self.off[i.min(j) - 1],
            _ => 0.0,
        }
    }

    /// Row-major dense copy; only for small oracle checks.
    pub fn to_dense(&self) -> Result<oracle::Dense> {
        let m = self.dim();
        oracle::check_dense_size(m + 1)?;
        let mut d = oracle::Dense::zeros(m);
        for i in 1..=m {
            for j in 1..=m {
                d.set(i - 1, j - 1, self.get(i, j));
            }
        }
        Ok(d)
    }
}

/// Covariance `K_{n−1}` of first differences of unit-variance white noise.
pub fn build_k(n: usize) -> Result<Tridiagonal> {
    if n <= 2 {
        return Err(Error::arg("n", format!("need n > 2, got {n}")));
    }
    Ok(Tridiagonal {
        diag: vec![2.0; n - 1],
        off: vec![-1.0; n - 2],
    })
}

/// `Σ_i w_i z_i²` for a spectral-domain vector.
pub fn weighted_quadratic_form(z: &DifferenceVector, weights: &[f64]) -> Result<f64> {
    if z.domain != Domain::Spectral {
        return Err(Error::arg("z", "quadratic form expects a spectral-domain vector"));
    }
    if z.len() != weights.len() {
        return Err(Error::arg(
            "weights",
            format!("length {} does not match vector length {}", weights.len(), z.len()),
        ));
    }
    Ok(z.values.iter().zip(weights).map(|(z, w)| w * z * z).sum())
}
