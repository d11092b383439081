//! Distributional checks of the simulators.

use rayon::prelude::*;

use spotvol_core::funcspace::FunctionSpec;
use spotvol_core::harness::stats::{mean_se, sample_variance};
use spotvol_core::simulate::{Model, NoiseLaw, Simulator};

fn spec(flag: &str) -> FunctionSpec {
    FunctionSpec::from_flag(flag).unwrap()
}

fn diffs(y: &[f64]) -> Vec<f64> {
    y.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Per-coordinate mean, variance and lag-1 covariance of `Y` over `reps`.
fn moments(model: Model, reps: u64) -> Vec<(f64, f64, f64)> {
    let n = 256;
    let sim = Simulator::new(model, spec("const:2.25"), spec("const:0.04"), NoiseLaw::Gaussian, n).unwrap();
    let ys: Vec<Vec<f64>> = (0..reps).into_par_iter().map(|r| sim.observe(31, r).y).collect();
    [9usize, 128, 255]
        .iter()
        .map(|&i| {
            let a: Vec<f64> = ys.iter().map(|y| y[i]).collect();
            let prod: Vec<f64> = ys.iter().map(|y| y[i] * y[i - 1]).collect();
            (mean_se(&a).0, sample_variance(&a), mean_se(&prod).0)
        })
        .collect()
}

#[test]
fn models_agree_for_constant_volatility() {
    let tbm = moments(Model::Tbm, 5000);
    let sbm = moments(Model::Sbm, 5000);
    for (i, (a, b)) in tbm.iter().zip(&sbm).enumerate() {
        let t = [10.0, 129.0, 256.0][i] / 256.0;
        let var = 2.25 * t + 0.04;
        // MC standard errors: mean √(var/M), variance and lag-1 product ≈ var·√(2/M)
        let se_mean = (var / 5000.0f64).sqrt();
        let se_var = var * (2.0 / 5000.0f64).sqrt();
        assert!((a.0 - b.0).abs() <= 3.0 * se_mean * 2f64.sqrt(), "mean at {t}");
        assert!((a.1 - b.1).abs() <= 3.0 * se_var * 2f64.sqrt(), "var at {t}: {} vs {}", a.1, b.1);
        assert!((a.2 - b.2).abs() <= 3.0 * se_var * 2f64.sqrt(), "lag-1 at {t}: {} vs {}", a.2, b.2);
        assert!((a.1 - var).abs() <= 3.0 * se_var, "var at {t}: {} vs {var}", a.1);
    }
}

#[test]
fn headline_scenario_difference_variance() {
    let n = 25_000;
    let sim = Simulator::new(Model::Tbm, spec("cos:2,0,0.5"), spec("const:0.01"), NoiseLaw::Gaussian, n).unwrap();
    let d = diffs(&sim.observe(1, 0).y);
    let want = 2.0 * 0.01 + 2.0 / n as f64;
    assert!((sample_variance(&d) / want - 1.0).abs() < 0.03, "{}", sample_variance(&d));
}

fn excess_kurtosis(x: &[f64]) -> f64 {
    let (m, _) = mean_se(x);
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / x.len() as f64;
    m4 / (m2 * m2) - 3.0
}

#[test]
fn heavy_tailed_noise_shows_in_differences() {
    let n = 25_000;
    let heavy = Simulator::new(Model::Tbm, spec("cos:2,0,0.5"), spec("const:0.01"), NoiseLaw::StudentT3, n).unwrap();
    let light = Simulator::new(Model::Tbm, spec("cos:2,0,0.5"), spec("const:0.01"), NoiseLaw::Gaussian, n).unwrap();
    let kh = excess_kurtosis(&diffs(&heavy.observe(2, 0).y));
    let kl = excess_kurtosis(&diffs(&light.observe(2, 0).y));
    assert!(kh > 1.0, "{kh}");
    assert!(kl.abs() < 0.2, "{kl}");
}

#[test]
fn draws_do_not_depend_on_thread_count() {
    let sim = Simulator::new(Model::Sbm, spec("jump:1,4,0.5"), spec("const:0.01"), NoiseLaw::StudentT3, 500).unwrap();
    let many: Vec<Vec<f64>> = (0..16u64).into_par_iter().map(|r| sim.observe(9, r).y).collect();
    let one: Vec<Vec<f64>> = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| (0..16u64).into_par_iter().map(|r| sim.observe(9, r).y).collect());
    assert_eq!(many, one);
}
