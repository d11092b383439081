//! Data behind the four illustration scenarios at `n = 25000`.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::scenario::Scenario;
use super::stats::relative_l2;
use super::NRule;
use crate::error::{Error, Result};
use crate::estimators::{argmin_first, truncation_errors, CutoffConfig, EstimatorKind, SpectralEstimator};
use crate::funcspace::{CosineSeries, FunctionSpec};
use crate::simulate::ObservationSeries;

pub const FIGURE_N: usize = 25_000;
/// Points of the `[0, 1]` grid the estimate panels are written on.
pub const PANEL_POINTS: usize = 1000;
/// Window around the jump searched for the overshoot.
pub const OVERSHOOT_WINDOW: (f64, f64) = (0.4, 0.6);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5];

    pub fn scenario(self) -> Scenario {
        Scenario::by_name(&self.to_string()).expect("figure scenarios are in the catalog")
    }

    /// Truncation rules for the `τ²` and `σ²` panels.
    pub fn n_rules(self) -> (NRule, NRule) {
        let tau = NRule::Oracle { max: 12 };
        match self {
            FigureId::Fig2 | FigureId::Fig3 => (tau, NRule::Oracle { max: 12 }),
            FigureId::Fig4 => (tau, NRule::Oracle { max: 40 }),
            FigureId::Fig5 => (tau, NRule::Fixed(10)),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        })
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::arg("figure", format!("unknown figure `{s}` (fig2|fig3|fig4|fig5)")))
    }
}

/// One estimated panel.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub series: CosineSeries,
    /// Oracle choice, or the fixed level.
    pub selected_n: usize,
    /// `‖est − truth‖_n / ‖truth‖_n` at the selected level.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRun {
    pub id: FigureId,
    pub seed: u64,
    pub obs: ObservationSeries,
    pub tau: Panel,
    pub sigma: Panel,
    /// `max σ̂² / upper level − 1` on the window around the jump (fig5 only).
    pub overshoot: Option<f64>,
}

fn panel(est: &SpectralEstimator, kind: EstimatorKind, y: &[f64], truth: &FunctionSpec, rule: NRule) -> Result<Panel> {
    let n = y.len();
    let max = match rule {
        NRule::Oracle { max } => max,
        other => other.level(kind, n).unwrap_or(0),
    };
    let full = est.series(kind, y, max)?;
    let truth_grid = truth.eval_grid(n);
    let selected_n = match rule {
        NRule::Oracle { .. } => argmin_first(&truncation_errors(&full, &truth_grid)),
        _ => max,
    };
    let series = full.truncated(selected_n);
    let relative_error = relative_l2(&series.eval_grid(n), &truth_grid);
    Ok(Panel { series, selected_n, relative_error })
}

/// Largest relative excess of `series` over `level` on `window`, sampled at
/// spacing `1e-4`.
pub fn overshoot(series: &CosineSeries, level: f64, window: (f64, f64)) -> f64 {
    let steps = ((window.1 - window.0) * 1e4).round() as usize;
    (0..=steps)
        .map(|i| series.eval_unchecked(window.0 + i as f64 * 1e-4))
        .fold(f64::NEG_INFINITY, f64::max)
        / level
        - 1.0
}

/// Simulates and estimates one figure scenario; no files are written.
pub fn run_figure(id: FigureId, seed: u64) -> Result<FigureRun> {
    let scenario = id.scenario();
    let obs = scenario.observe(FIGURE_N, seed, 0)?;
    let est = SpectralEstimator::new(FIGURE_N, &CutoffConfig::default())?;
    let (tau_rule, sigma_rule) = id.n_rules();
    let tau = panel(&est, EstimatorKind::Tau, &obs.y, &scenario.tau2, tau_rule)?;
    let sigma = panel(&est, EstimatorKind::Sigma, &obs.y, &obs.sigma2, sigma_rule)?;
    let overshoot = match (&id, &obs.sigma2) {
        (FigureId::Fig5, FunctionSpec::Jump { low, high, .. }) => {
            Some(overshoot(&sigma.series, low.max(*high), OVERSHOOT_WINDOW))
        }
        _ => None,
    };
    Ok(FigureRun { id, seed, obs, tau, sigma, overshoot })
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_estimate(path: &Path, series: &CosineSeries, truth: &FunctionSpec) -> Result<()> {
    write_file(path, |w| {
        writeln!(w, "t,estimate,truth")?;
        for i in 0..=PANEL_POINTS {
            let t = i as f64 / PANEL_POINTS as f64;
            writeln!(w, "{t},{:e},{:e}", series.eval_unchecked(t), truth.eval(t))?;
        }
        Ok(())
    })
}

/// Runs a figure scenario and writes its panels to `out_dir`:
/// `<id>_raw.csv`, `<id>_latent.csv`, `<id>_tau.csv`, `<id>_sigma.csv`,
/// `<id>_summary.csv`, plus `<id>_sigma_path.csv` for the random-volatility
/// scenario. Returns the run and the written paths.
pub fn replicate_figure(id: FigureId, seed: u64, out_dir: &Path) -> Result<(FigureRun, Vec<PathBuf>)> {
    fs::create_dir_all(out_dir)?;
    let run = run_figure(id, seed)?;
    let n = run.obs.n();
    let path = |name: &str| out_dir.join(format!("{id}_{name}.csv"));
    let mut written = Vec::new();

    let raw = path("raw");
    write_file(&raw, |w| {
        writeln!(w, "i,t,y")?;
        for (i, y) in run.obs.y.iter().enumerate() {
            writeln!(w, "{},{},{:e}", i + 1, (i + 1) as f64 / n as f64, y)?;
        }
        Ok(())
    })?;
    written.push(raw);

    let latent = path("latent");
    write_file(&latent, |w| {
        writeln!(w, "i,t,x")?;
        for (i, x) in run.obs.latent.iter().enumerate() {
            writeln!(w, "{},{},{:e}", i + 1, (i + 1) as f64 / n as f64, x)?;
        }
        Ok(())
    })?;
    written.push(latent);

    let tau = path("tau");
    write_estimate(&tau, &run.tau.series, &run.obs.tau2)?;
    written.push(tau);
    let sigma = path("sigma");
    write_estimate(&sigma, &run.sigma.series, &run.obs.sigma2)?;
    written.push(sigma);

    if let FunctionSpec::Tabulated(values) = &run.obs.sigma2 {
        let p = path("sigma_path");
        write_file(&p, |w| {
            writeln!(w, "i,t,sigma2")?;
            let m = values.len() - 1;
            for (i, v) in values.iter().enumerate() {
                writeln!(w, "{i},{},{:e}", i as f64 / m as f64, v)?;
            }
            Ok(())
        })?;
        written.push(p);
    }

    let summary = path("summary");
    write_file(&summary, |w| {
        writeln!(w, "key,value")?;
        writeln!(w, "figure,{id}")?;
        writeln!(w, "seed,{seed}")?;
        writeln!(w, "n,{n}")?;
        writeln!(w, "model,{}", run.obs.model)?;
        writeln!(w, "noise,{}", run.obs.noise)?;
        writeln!(w, "tau_selected_n,{}", run.tau.selected_n)?;
        writeln!(w, "sigma_selected_n,{}", run.sigma.selected_n)?;
        writeln!(w, "tau_relative_error,{:e}", run.tau.relative_error)?;
        writeln!(w, "sigma_relative_error,{:e}", run.sigma.relative_error)?;
        if let Some(o) = run.overshoot {
            writeln!(w, "overshoot,{o:e}")?;
        }
        Ok(())
    })?;
    written.push(summary);
    Ok((run, written))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.to_string().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig1".parse::<FigureId>().is_err());
    }

    #[test]
    fn overshoot_of_known_series() {
        let s = CosineSeries::new(vec![4.0, 0.0]).unwrap();
        assert_eq!(overshoot(&s, 4.0, (0.4, 0.6)), 0.0);
        let s = CosineSeries::new(vec![4.0, -1.0]).unwrap();
        // 4 − 2cos(πt) peaks at t = 0.6
        let want = (4.0 - 2.0 * (0.6 * std::f64::consts::PI).cos()) / 4.0 - 1.0;
        assert!((overshoot(&s, 4.0, (0.4, 0.6)) - want).abs() < 1e-12);
    }
}
