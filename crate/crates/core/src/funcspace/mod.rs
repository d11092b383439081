//! Deterministic functions on `[0, 1]` and their cosine-basis coefficients.
//!
//! The basis is `{1, √2 cos(kπt)}`; a [`CosineSeries`] stores the scaled
//! coefficients `θ_k = ∫ f(x) cos(kπx) dx`, so that
//! `f(t) = θ_0 + 2 Σ_{k≥1} θ_k cos(kπt)`.

mod quad;
mod text;

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use quad::{adaptive_simpson, paneled_simpson};

/// Default absolute tolerance for coefficient integrals.
pub const COEFF_TOL: f64 = 1e-10;

/// Something that can be evaluated on `[0, 1]` and integrated piece by piece.
pub trait UnitFunction: Sync {
    fn eval(&self, t: f64) -> f64;

    /// Interior points of `(0, 1)` where the function may be discontinuous.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Value at `t` as seen from inside the segment `[a, b]` between two
    /// consecutive breakpoints, i.e. one-sided at the segment ends.
    fn eval_on_segment(&self, t: f64, _a: f64, _b: f64) -> f64 {
        self.eval(t)
    }
}

impl<F: Fn(f64) -> f64 + Sync> UnitFunction for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

/// Cosine series `θ_0 + 2 Σ_{i=1}^N θ_i cos(iπt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineSeries {
    theta: Vec<f64>,
}

impl CosineSeries {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::arg("theta", "cosine series needs at least θ_0"));
        }
        if let Some(i) = theta.iter().position(|v| !v.is_finite()) {
            return Err(Error::arg("theta", format!("θ_{i} is not finite")));
        }
        Ok(Self { theta })
    }

    pub fn constant(c: f64) -> Self {
        Self { theta: vec![c] }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Highest index `N`.
    pub fn max_index(&self) -> usize {
        self.theta.len() - 1
    }

    /// Series cut after index `n` (or unchanged if already shorter).
    pub fn truncated(&self, n: usize) -> Self {
        let len = (n + 1).min(self.theta.len());
        Self {
            theta: self.theta[..len].to_vec(),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::arg("t", format!("{t} is outside [0, 1]")));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        self.theta[0]
            + 2.0
                * self.theta[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, th)| th * ((i + 1) as f64 * PI * t).cos())
                    .sum::<f64>()
    }

    /// Values at `i/n`, `i = 1..=n`.
    pub fn eval_grid(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|i| self.eval_unchecked(i as f64 / n as f64)).collect()
    }

    /// `∫_a^b` of the series, in closed form.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let mut acc = self.theta[0] * (b - a);
        for (i, th) in self.theta.iter().enumerate().skip(1) {
            let w = i as f64 * PI;
            acc += 2.0 * th * ((w * b).sin() - (w * a).sin()) / w;
        }
        acc
    }

    /// `k,theta` CSV with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,theta\n");
        for (k, th) in self.theta.iter().enumerate() {
            out.push_str(&format!("{k},{th:e}\n"));
        }
        out
    }

    pub fn from_csv(src: &str) -> Result<Self> {
        text::series_from_csv(src)
    }
}

impl UnitFunction for CosineSeries {
    fn eval(&self, t: f64) -> f64 {
        self.eval_unchecked(t)
    }
}

/// A deterministic function on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Constant(f64),
    Cosine(CosineSeries),
    /// `low` on `[0, point]`, `high` on `(point, 1]`.
    Jump { low: f64, high: f64, point: f64 },
    /// Values `v_0..v_m` on the grid `i/m`; piecewise constant on
    /// `[i/m, (i+1)/m)`.
    Tabulated(Vec<f64>),
}

impl FunctionSpec {
    pub fn constant(c: f64) -> Result<Self> {
        Self::Constant(c).validated()
    }

    pub fn cosine(theta: Vec<f64>) -> Result<Self> {
        Ok(Self::Cosine(CosineSeries::new(theta)?))
    }

    pub fn jump(low: f64, high: f64, point: f64) -> Result<Self> {
        Self::Jump { low, high, point }.validated()
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        Self::Tabulated(values).validated()
    }

    pub fn validated(self) -> Result<Self> {
        match &self {
            FunctionSpec::Constant(c) if !c.is_finite() => {
                Err(Error::FunctionSpec(format!("constant {c} is not finite")))
            }
            FunctionSpec::Cosine(s) => CosineSeries::new(s.theta.clone()).map(|_| ()),
            FunctionSpec::Jump { low, high, point } => {
                if !low.is_finite() || !high.is_finite() {
                    Err(Error::FunctionSpec("jump levels must be finite".into()))
                } else if !(0.0..=1.0).contains(point) {
                    Err(Error::FunctionSpec(format!("jump point {point} outside [0, 1]")))
                } else {
                    Ok(())
                }
            }
            FunctionSpec::Tabulated(v) => {
                if v.len() < 2 {
                    Err(Error::FunctionSpec("tabulated function needs at least 2 values".into()))
                } else if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                    Err(Error::FunctionSpec(format!("tabulated value {i} is not finite")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
        .map_err(|e| match e {
            Error::InvalidArgument { reason, .. } => Error::FunctionSpec(reason),
            other => other,
        })?;
        Ok(self)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            FunctionSpec::Constant(c) => *c,
            FunctionSpec::Cosine(s) => s.eval_unchecked(t),
            FunctionSpec::Jump { low, high, point } => {
                if t <= *point {
                    *low
                } else {
                    *high
                }
            }
            FunctionSpec::Tabulated(v) => v[tab_index(v.len(), t)],
        }
    }

    /// Values at `i/n`, `i = 1..=n`.
    pub fn eval_grid(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|i| self.eval(i as f64 / n as f64)).collect()
    }

    /// `∫_a^b f`, exact for every kind.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            FunctionSpec::Constant(c) => c * (b - a),
            FunctionSpec::Cosine(s) => s.integral(a, b),
            FunctionSpec::Jump { low, high, point } => {
                let left = (b.min(*point) - a).max(0.0);
                let right = (b - a.max(*point)).max(0.0);
                low * left + high * right
            }
            FunctionSpec::Tabulated(v) => {
                let m = (v.len() - 1) as f64;
                let first = tab_index(v.len(), a);
                let mut acc = 0.0;
                let mut lo = a;
                let mut i = first;
                while lo < b {
                    let edge = ((i + 1) as f64 / m).min(b);
                    let edge = if i + 1 >= v.len() { b } else { edge };
                    acc += v[i] * (edge - lo);
                    lo = edge;
                    i += 1;
                }
                acc
            }
        }
    }

    /// Whether `f ≥ 0` everywhere (constant, jump) or on every sample point
    /// `i/n`, `i = 0..=n` (cosine, tabulated).
    pub fn check_nonnegative(&self, n: usize, what: &str) -> Result<()> {
        let bad = match self {
            FunctionSpec::Constant(c) => (*c < 0.0).then_some((0.0, *c)),
            FunctionSpec::Jump { low, high, point } => {
                if *low < 0.0 {
                    Some((0.0, *low))
                } else if *high < 0.0 {
                    Some((*point, *high))
                } else {
                    None
                }
            }
            _ => (0..=n)
                .map(|i| i as f64 / n as f64)
                .map(|t| (t, self.eval(t)))
                .find(|(_, v)| *v < 0.0 || !v.is_finite()),
        };
        match bad {
            Some((t, v)) => Err(Error::Domain(format!("{what} is negative ({v}) at t = {t}"))),
            None => Ok(()),
        }
    }

    /// Pointwise square root, for turning a variance function into a
    /// standard-deviation function.
    pub fn sqrt_at(&self, t: f64) -> Result<f64> {
        let v = self.eval(t);
        if v < 0.0 || !v.is_finite() {
            return Err(Error::Domain(format!("variance {v} at t = {t} has no real square root")));
        }
        Ok(v.sqrt())
    }

    /// Key-value text block (`kind=...` plus kind-specific fields).
    pub fn to_kv(&self) -> String {
        text::to_kv(self)
    }

    pub fn from_kv(src: &str) -> Result<Self> {
        text::from_kv(src)
    }

    /// Parses the flag mini-language: `const:c`, `cos:θ0,θ1,...`,
    /// `jump:lo,hi,point` or `file:path` (a key-value block on disk).
    pub fn from_flag(src: &str) -> Result<Self> {
        text::from_flag(src)
    }
}

fn tab_index(len: usize, t: f64) -> usize {
    let m = (len - 1) as f64;
    ((t * m).floor().max(0.0) as usize).min(len - 1)
}

impl UnitFunction for FunctionSpec {
    fn eval(&self, t: f64) -> f64 {
        FunctionSpec::eval(self, t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            FunctionSpec::Jump { point, .. } if *point > 0.0 && *point < 1.0 => vec![*point],
            FunctionSpec::Tabulated(v) => {
                let m = v.len() - 1;
                (1..m).map(|i| i as f64 / m as f64).collect()
            }
            _ => Vec::new(),
        }
    }

    fn eval_on_segment(&self, t: f64, a: f64, b: f64) -> f64 {
        match self {
            FunctionSpec::Jump { .. } | FunctionSpec::Tabulated(_) => self.eval(0.5 * (a + b)),
            _ => self.eval(t),
        }
    }
}

/// Segments of `[0, 1]` between consecutive breakpoints.
fn segments<F: UnitFunction + ?Sized>(f: &F) -> Vec<(f64, f64)> {
    let mut cuts = f.breakpoints();
    cuts.retain(|c| *c > 0.0 && *c < 1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = 0.0;
    for c in cuts {
        out.push((lo, c));
        lo = c;
    }
    out.push((lo, 1.0));
    out
}

/// `∫_0^1 g(f(x), x) dx`, split at the breakpoints of `f` and into enough
/// panels per segment to resolve oscillation up to frequency `freq`.
pub(crate) fn integrate_with<F, G>(f: &F, freq: usize, tol: f64, g: G) -> f64
where
    F: UnitFunction + ?Sized,
    G: Fn(f64, f64) -> f64,
{
    let segs = segments(f);
    let per_seg = tol / segs.len() as f64;
    segs.iter()
        .map(|&(a, b)| {
            let panels = ((freq as f64 + 1.0) * (b - a)).ceil() as usize;
            paneled_simpson(&|x: f64| g(f.eval_on_segment(x, a, b), x), a, b, panels, per_seg)
        })
        .sum()
}

/// Cosine coefficients `θ_k = ∫ f(x) cos(kπx) dx`, `k = 0..=max_k`, by
/// adaptive quadrature to absolute tolerance `tol`.
pub fn cosine_coeffs<F: UnitFunction + ?Sized>(f: &F, max_k: usize, tol: f64) -> Result<CosineSeries> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::arg("tol", format!("tolerance must be positive, got {tol}")));
    }
    let theta: Vec<f64> = (0..=max_k)
        .map(|k| {
            let w = k as f64 * PI;
            integrate_with(f, k, tol, |v, x| v * (w * x).cos())
        })
        .collect();
    CosineSeries::new(theta).map_err(|_| Error::FunctionSpec("function is not evaluable on [0, 1]".into()))
}

/// `∫_0^1 f²` minus the truncated Parseval sum `θ_0² + 2 Σ θ_i²`.
pub fn parseval_gap<F: UnitFunction + ?Sized>(f: &F, series: &CosineSeries) -> f64 {
    let energy = integrate_with(f, 0, COEFF_TOL, |v, _| v * v);
    let th = series.theta();
    energy - th[0] * th[0] - 2.0 * th[1..].iter().map(|t| t * t).sum::<f64>()
}

/// Weighted coefficient energy `Σ_{i=1}^N i^{2α} θ_i²` of a cosine series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevDiagnostics {
    pub alpha: f64,
    pub truncation: usize,
    pub weighted_sum: f64,
}

impl SobolevDiagnostics {
    /// Whether the truncated series lies in the ellipsoid of radius `bound`.
    pub fn within(&self, bound: f64) -> bool {
        self.weighted_sum <= bound
    }
}

pub fn sobolev_weighted_sum(series: &CosineSeries, alpha: f64) -> Result<SobolevDiagnostics> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::arg("alpha", format!("smoothness must be positive, got {alpha}")));
    }
    let weighted_sum = series
        .theta()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, th)| (i as f64).powf(2.0 * alpha) * th * th)
        .sum();
    Ok(SobolevDiagnostics {
        alpha,
        truncation: series.max_index(),
        weighted_sum,
    })
}

/// Both sides of `∫ (f^{(α)})² = 2π^{2α} Σ k^{2α} θ_k²` for integer `α`.
///
/// `derivative` is `f^{(α)}`; when absent it is approximated by central
/// differences of `f` continued evenly across both endpoints, which is the
/// continuation the cosine basis assumes.
pub fn derivative_energy_identity<F: UnitFunction + ?Sized>(
    f: &F,
    alpha: u32,
    max_k: usize,
    derivative: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Result<(f64, f64)> {
    if alpha == 0 {
        return Err(Error::arg("alpha", "derivative order must be positive"));
    }
    let lhs = match derivative {
        Some(d) => integrate_with(&|x: f64| d(x), max_k, COEFF_TOL, |v, _| v * v),
        None => {
            let h = 1e-3;
            let fd = |x: f64| finite_difference(f, alpha, x, h).powi(2);
            quad::composite_simpson(&fd, 0.0, 1.0, 64 * (max_k + 1))
        }
    };
    let coeffs = cosine_coeffs(f, max_k, COEFF_TOL)?;
    let a2 = 2.0 * alpha as f64;
    let rhs = 2.0
        * PI.powf(a2)
        * coeffs
            .theta()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, th)| (k as f64).powf(a2) * th * th)
            .sum::<f64>();
    Ok((lhs, rhs))
}

fn finite_difference<F: UnitFunction + ?Sized>(f: &F, order: u32, x: f64, h: f64) -> f64 {
    let reflect = |t: f64| {
        let t = if t < 0.0 { -t } else { t };
        if t > 1.0 {
            2.0 - t
        } else {
            t
        }
    };
    let half = order as f64 / 2.0;
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=order {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f.eval(reflect(x + (half - j as f64) * h));
        binom = binom * (order - j) as f64 / (j + 1) as f64;
    }
    acc / h.powi(order as i32)
}

/// Aliasing sum `A(f, r)` on `2n`-periodic index classes of the coefficient
/// sequence `s_q` (the coefficients of `f`), truncated at `q ≤ trunc`.
pub fn aliased_sum(theta: &CosineSeries, r: i64, n: usize, trunc: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg("n", format!("need n > 1, got {n}")));
    }
    if trunc < n {
        return Err(Error::arg("trunc", format!("truncation {trunc} is below n = {n}")));
    }
    let s = |q: usize| theta.theta().get(q).copied().unwrap_or(0.0);
    let period = 2 * n;
    let last = trunc.min(theta.max_index());
    let rr = r.rem_euclid(period as i64) as usize;
    let sum = if rr == 0 {
        s(0) + 2.0 * (1..).map(|m| m * period).take_while(|&q| q <= last).map(s).sum::<f64>()
    } else if rr == n {
        (0..).map(|m| m * period + n).take_while(|&q| q <= last).map(s).sum()
    } else {
        let mut acc = 0.0;
        let mut base = 0;
        while base <= last {
            for q in [base + rr, base + period - rr] {
                if q <= last {
                    acc += s(q);
                }
            }
            base += period;
        }
        acc
    };
    Ok(sum)
}

/// [`aliased_sum`] with the default truncation `8n`.
pub fn aliased_sum_default(theta: &CosineSeries, r: i64, n: usize) -> Result<f64> {
    aliased_sum(theta, r, n, 8 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn constant_coeffs() {
        let f = FunctionSpec::constant(1.7).unwrap();
        let s = cosine_coeffs(&f, 6, COEFF_TOL).unwrap();
        assert!(close(s.theta()[0], 1.7, 1e-10));
        assert!(s.theta()[1..].iter().all(|t| t.abs() < 1e-10));
    }

    #[test]
    fn shifted_cosine_coeffs() {
        let f = |x: f64| 2.0 + (2.0 * PI * x).cos();
        let s = cosine_coeffs(&f, 8, COEFF_TOL).unwrap();
        for (k, th) in s.theta().iter().enumerate() {
            let want = match k {
                0 => 2.0,
                2 => 0.5,
                _ => 0.0,
            };
            assert!(close(*th, want, 1e-10), "θ_{k} = {th}");
        }
    }

    #[test]
    fn jump_coeffs_match_antiderivative() {
        // ∫_{1/2}^1 cos(kπx) dx = -sin(kπ/2)/(kπ)
        let f = FunctionSpec::jump(1.0, 2.0, 0.5).unwrap();
        let s = cosine_coeffs(&f, 8, COEFF_TOL).unwrap();
        assert!(close(s.theta()[0], 1.5, 1e-10));
        for k in 1..=8 {
            let kp = k as f64 * PI;
            let want = -(kp / 2.0).sin() / kp;
            assert!(close(s.theta()[k], want, 1e-10), "k = {k}");
        }
    }

    #[test]
    fn bad_tolerance() {
        let f = FunctionSpec::constant(1.0).unwrap();
        assert!(matches!(cosine_coeffs(&f, 2, 0.0), Err(Error::InvalidArgument { name: "tol", .. })));
    }

    #[test]
    fn eval_series_examples() {
        assert_eq!(CosineSeries::constant(5.0).eval(0.3).unwrap(), 5.0);
        assert_eq!(CosineSeries::new(vec![0.0, 1.0]).unwrap().eval(0.0).unwrap(), 2.0);
        let s = CosineSeries::new(vec![2.0, 0.0, 0.5]).unwrap();
        assert!(close(s.eval(0.25).unwrap(), 2.0, 1e-15));
        assert!(s.eval(1.2).is_err());
        assert!(s.eval(-0.1).is_err());
    }

    #[test]
    fn sobolev_examples() {
        let d = sobolev_weighted_sum(&CosineSeries::constant(3.0), 2.5).unwrap();
        assert_eq!(d.weighted_sum, 0.0);
        let s = CosineSeries::new(vec![2.0, 0.0, 0.5]).unwrap();
        assert!(close(sobolev_weighted_sum(&s, 1.0).unwrap().weighted_sum, 1.0, 1e-15));
        assert!(sobolev_weighted_sum(&s, 0.0).is_err());
    }

    #[test]
    fn jump_weighted_partial_sums() {
        // θ_k = -sin(kπ/2)/(kπ): the weighted terms behave like k^{2α-2} on odd k,
        // so partial sums converge for α < 1/2 and diverge for α > 1/2.
        let f = FunctionSpec::jump(1.0, 2.0, 0.5).unwrap();
        let s = cosine_coeffs(&f, 2000, 1e-9).unwrap();
        let oracle = |n: usize, alpha: f64| -> f64 {
            (1..=n)
                .map(|k| {
                    let kp = k as f64 * PI;
                    (k as f64).powf(2.0 * alpha) * ((kp / 2.0).sin() / kp).powi(2)
                })
                .sum()
        };
        for alpha in [0.4, 0.6] {
            let sums: Vec<f64> = [500, 1000, 2000]
                .iter()
                .map(|&n| sobolev_weighted_sum(&s.truncated(n), alpha).unwrap().weighted_sum)
                .collect();
            for (got, n) in sums.iter().zip([500, 1000, 2000]) {
                let want = oracle(n, alpha);
                assert!(close(*got, want, 1e-6 * want), "α = {alpha}, N = {n}");
            }
            assert!(sums[1] > sums[0] && sums[2] > sums[1]);
            // successive increments scale by 2^{2α-1}
            let ratio = (sums[2] - sums[1]) / (sums[1] - sums[0]);
            let want = 2f64.powf(2.0 * alpha - 1.0);
            assert!((ratio - want).abs() < 0.02, "α = {alpha}: {ratio} vs {want}");
        }
    }

    #[test]
    fn derivative_identity_examples() {
        let c = FunctionSpec::constant(2.0).unwrap();
        let (l, r) = derivative_energy_identity(&c, 1, 16, Some(&|_| 0.0)).unwrap();
        assert_eq!((l, r.abs() < 1e-18), (0.0, true));

        let f = |x: f64| (PI * x).cos();
        let (l, r) = derivative_energy_identity(&f, 1, 16, Some(&|x: f64| -PI * (PI * x).sin())).unwrap();
        assert!(close(l, PI * PI / 2.0, 1e-9));
        assert!((l - r).abs() / l <= 1e-6);

        let g = |x: f64| (3.0 * PI * x).cos();
        let d2 = |x: f64| -9.0 * PI * PI * (3.0 * PI * x).cos();
        let (l, r) = derivative_energy_identity(&g, 2, 16, Some(&d2)).unwrap();
        let want = 81.0 * PI.powi(4) / 2.0;
        assert!((l - want).abs() / want <= 1e-9);
        assert!((l - r).abs() / l <= 1e-6);
    }

    #[test]
    fn derivative_identity_finite_differences() {
        let g = |x: f64| (3.0 * PI * x).cos();
        let (l, r) = derivative_energy_identity(&g, 2, 16, None).unwrap();
        assert!((l - r).abs() / r <= 1e-4, "{l} vs {r}");
    }

    #[test]
    fn aliased_sum_examples() {
        let c = CosineSeries::constant(3.0);
        assert_eq!(aliased_sum(&c, 0, 16, 128).unwrap(), 3.0);
        assert_eq!(aliased_sum(&c, 3, 16, 128).unwrap(), 0.0);
        let f = |x: f64| 2.0 + (2.0 * PI * x).cos();
        let s = cosine_coeffs(&f, 128, COEFF_TOL).unwrap();
        assert!(close(aliased_sum(&s, 2, 16, 128).unwrap(), 0.5, 1e-9));
        assert!(aliased_sum(&s, 2, 16, 15).is_err());
    }

    #[test]
    fn aliased_sum_classes() {
        // s_q = q + 1 so that every index is distinguishable.
        let s = CosineSeries::new((0..=40).map(|q| q as f64 + 1.0).collect()).unwrap();
        let n = 5;
        // r ≡ 0: s_0 + 2(s_10 + s_20 + s_30 + s_40)
        assert_eq!(aliased_sum(&s, 20, n, 40).unwrap(), 1.0 + 2.0 * (11.0 + 21.0 + 31.0 + 41.0));
        // r ≡ n: s_5 + s_15 + s_25 + s_35
        assert_eq!(aliased_sum(&s, -5, n, 40).unwrap(), 6.0 + 16.0 + 26.0 + 36.0);
        // r = 3: q ∈ {3, 7, 13, 17, 23, 27, 33, 37}
        let want: f64 = [3, 7, 13, 17, 23, 27, 33, 37].iter().map(|q| *q as f64 + 1.0).sum();
        assert_eq!(aliased_sum(&s, 3, n, 40).unwrap(), want);
        assert_eq!(aliased_sum(&s, -3, n, 40).unwrap(), want);
        assert_eq!(aliased_sum(&s, 13, n, 40).unwrap(), want);
    }

    #[test]
    fn tabulated_is_left_piecewise_constant() {
        let f = FunctionSpec::tabulated(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.eval(0.33), 1.0);
        assert_eq!(f.eval(1.0 / 3.0 + 1e-12), 2.0);
        assert_eq!(f.eval(0.99), 3.0);
        assert_eq!(f.eval(1.0), 4.0);
        assert!(close(f.integral(0.0, 1.0), 2.0, 1e-15));
        assert!(close(f.integral(0.5, 0.9), 0.5 / 3.0 * 2.0 + (0.9 - 2.0 / 3.0) * 3.0, 1e-15));
        let s = cosine_coeffs(&f, 0, COEFF_TOL).unwrap();
        assert!(close(s.theta()[0], 2.0, 1e-10));
    }

    #[test]
    fn jump_integral_and_sign_checks() {
        let f = FunctionSpec::jump(1.0, 4.0, 0.5).unwrap();
        assert_eq!(f.integral(0.25, 0.75), 0.25 + 1.0);
        assert!(f.check_nonnegative(32, "sigma2").is_ok());
        let g = FunctionSpec::cosine(vec![0.1, 0.2]).unwrap();
        assert!(matches!(g.check_nonnegative(32, "tau2"), Err(Error::Domain(_))));
        assert!(FunctionSpec::jump(1.0, 2.0, 1.5).is_err());
        assert!(FunctionSpec::tabulated(vec![1.0]).is_err());
        assert!(FunctionSpec::constant(f64::NAN).is_err());
    }
}
