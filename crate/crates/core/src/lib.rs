//! Spectral series estimators of spot volatility `σ²` and noise variance
//! `τ²` from high-frequency observations `Y_i = X(i/n) + τ(i/n) ε_i`.
//!
//! Modules, bottom-up:
//!
//! * [`funcspace`]: cosine series, function specs, Sobolev diagnostics;
//! * [`simulate`]: time-changed and scaled Brownian motion plus noise;
//! * [`spectral`]: discrete sine transform and the eigen-structure of the
//!   second-difference matrix;
//! * [`estimators`]: coefficient and series estimators;
//! * [`harness`]: Monte Carlo MISE studies, rate fits and figure data.

pub mod error;
pub mod estimators;
pub mod funcspace;
pub mod harness;
pub mod simulate;
pub mod spectral;

pub use error::{Error, Result};
pub use estimators::{CutoffConfig, EstimatorKind, SigmaBand, SpectralEstimator, TauRule};
pub use funcspace::{CosineSeries, FunctionSpec};
pub use simulate::{Model, NoiseLaw, ObservationSeries, Simulator};
