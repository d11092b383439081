use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};

use spotvol_core::estimators::{advisory_warnings, STANDARD_BIAS};
use spotvol_core::harness::{self, ExperimentConfig, FigureId, NRule, Scenario};
use spotvol_core::simulate::{check_n, stream_rng, StreamRole};
use spotvol_core::spectral::oracle::{aliasing_identity_residual, diagonalization_residual, naive_dst};
use spotvol_core::spectral::{dst_apply, eigensum_band, SineTransform};
use spotvol_core::{
    CutoffConfig, EstimatorKind, FunctionSpec, Model, NoiseLaw, SigmaBand, Simulator, SpectralEstimator, TauRule,
};

use crate::args::{EstimateArgs, FigureArgs, SimulateArgs, SweepArgs};
use crate::io::{fail, out_dir, read_kv, read_series, write_text, CliError, CliResult, Target};
use crate::Outcome;

const SIMULATE_KEYS: [&str; 7] = ["model", "n", "seed", "replication", "sigma2", "tau2", "noise"];

fn parse_field<T: std::str::FromStr>(key: &str, raw: &str) -> CliResult<T> {
    raw.parse().map_err(|_| CliError(format!("`{key}`: cannot parse `{raw}`")))
}

fn function_spec(key: &str, raw: &str) -> CliResult<FunctionSpec> {
    FunctionSpec::from_flag(raw).map_err(|e| CliError(format!("`--{key}`: {e}")))
}

pub fn simulate(a: SimulateArgs) -> CliResult<Outcome> {
    let mut model = None;
    let mut n = None;
    let mut seed = None;
    let mut replication = None;
    let mut sigma2 = None;
    let mut tau2 = None;
    let mut noise = None;
    if let Some(path) = &a.config {
        for (k, v) in read_kv(path)? {
            match k.as_str() {
                "model" => model = Some(v),
                "n" => n = Some(parse_field::<usize>("n", &v)?),
                "seed" => seed = Some(parse_field::<u64>("seed", &v)?),
                "replication" => replication = Some(parse_field::<u64>("replication", &v)?),
                "sigma2" => sigma2 = Some(v),
                "tau2" => tau2 = Some(v),
                "noise" => noise = Some(v),
                other => {
                    return fail(format!(
                        "config file `{}`: unknown key `{other}` (known: {})",
                        path.display(),
                        SIMULATE_KEYS.join(", ")
                    ))
                }
            }
        }
    }
    let model_name = a.model.or(model).unwrap_or_else(|| "tbm".into());
    let noise_name = a.noise.or(noise).unwrap_or_else(|| "gaussian".into());
    let Some(n) = a.n.or(n) else { return fail("missing `--n`") };
    let seed = a.seed.or(seed).unwrap_or(0);
    let replication = a.replication.or(replication).unwrap_or(0);
    let Some(sigma2_src) = a.sigma2.or(sigma2) else { return fail("missing `--sigma2`") };
    let Some(tau2_src) = a.tau2.or(tau2) else { return fail("missing `--tau2`") };

    check_n(n)?;
    let model: Model = model_name.parse()?;
    let noise: NoiseLaw = noise_name.parse()?;
    let sim = Simulator::new(
        model,
        function_spec("sigma2", &sigma2_src)?,
        function_spec("tau2", &tau2_src)?,
        noise,
        n,
    )?;
    let obs = sim.observe(seed, replication);

    let mut csv = String::with_capacity(32 * n);
    csv.push_str("i,t,y\n");
    for (i, y) in obs.y.iter().enumerate() {
        let _ = writeln!(csv, "{},{},{:e}", i + 1, (i + 1) as f64 / n as f64, y);
    }
    let target = Target::resolve(a.out, "simulate.csv");
    target.write(&csv)?;
    if let Some(side) = target.sidecar(".config.txt") {
        let config = format!(
            "command=simulate\nmodel={model}\nn={n}\nseed={seed}\nreplication={replication}\nsigma2={sigma2_src}\ntau2={tau2_src}\nnoise={noise_name}\n"
        );
        write_text(&side, &config)?;
    }
    Ok(Outcome::Ok)
}

fn cutoff_config(kind: EstimatorKind, cutoff: &str, tau_cutoff: Option<&str>) -> CliResult<CutoffConfig> {
    let parse_tau = |s: &str| s.parse::<TauRule>().map_err(|e| CliError(format!("`--cutoff`/`--tau-cutoff`: {e}")));
    match kind {
        EstimatorKind::Tau => {
            if tau_cutoff.is_some() {
                return fail("`--tau-cutoff` applies to the sigma estimator only; use `--cutoff`");
            }
            Ok(CutoffConfig { tau_rule: parse_tau(cutoff)?, sigma_band: SigmaBand::Standard })
        }
        EstimatorKind::Sigma => Ok(CutoffConfig {
            tau_rule: parse_tau(tau_cutoff.unwrap_or("standard"))?,
            sigma_band: cutoff.parse::<SigmaBand>().map_err(|e| CliError(format!("`--cutoff`: {e}")))?,
        }),
    }
}

pub fn estimate(kind: EstimatorKind, a: EstimateArgs) -> CliResult<Outcome> {
    if let Some(n) = a.n {
        check_n(n)?;
    }
    let cfg = cutoff_config(kind, &a.cutoff, a.tau_cutoff.as_deref())?;
    if a.grid == 0 {
        return fail("`--grid` must be at least 1");
    }
    let Some(input) = &a.input else { return fail("missing `--input`") };
    let mut y = read_series(input)?;
    let n = a.n.unwrap_or(y.len());
    if n > y.len() {
        return fail(format!("`--n` = {n} exceeds the {} observations in `{}`", y.len(), input.display()));
    }
    y.truncate(n);
    check_n(n)?;

    let est = SpectralEstimator::new(n, &cfg)?;
    let series = est.series(kind, &y, a.big_n)?;
    let warnings = advisory_warnings(kind, n, a.big_n);
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let mut csv = String::from("t,estimate\n");
    for i in 0..=a.grid {
        let t = i as f64 / a.grid as f64;
        let _ = writeln!(csv, "{t},{:e}", series.eval(t)?);
    }
    let target = Target::resolve(a.out, &format!("estimate_{kind}.csv"));
    target.write(&csv)?;
    if let Some(side) = target.sidecar(".theta.csv") {
        write_text(&side, &series.to_csv())?;
    }
    if let Some(side) = target.sidecar(".config.txt") {
        let mut config = format!(
            "command=estimate-{kind}\ninput={}\nn={n}\nN={}\ngrid={}\n",
            input.display(),
            a.big_n,
            a.grid
        );
        config.push_str(&est.cutoff().to_kv());
        for w in &warnings {
            let _ = writeln!(config, "warning={w}");
        }
        write_text(&side, &config)?;
    }
    Ok(Outcome::Ok)
}

pub fn mise_sweep(a: SweepArgs) -> CliResult<Outcome> {
    let kind: EstimatorKind = a.kind.parse()?;
    let cfg = ExperimentConfig {
        scenario: Scenario::by_name(&a.scenario)?,
        ns: a.n_list,
        reps: a.reps,
        seed: a.seed,
        kind,
        cutoff: cutoff_config(kind, &a.cutoff, a.tau_cutoff.as_deref())?,
        n_rule: a.n_rule.parse::<NRule>()?,
    };
    cfg.validate()?;
    if a.max_slope.is_some() && cfg.ns.len() < 3 {
        return fail("`--max-slope` needs at least 3 sample sizes in `--n-list`");
    }
    let report = harness::run_mise(&cfg)?;

    let dir = out_dir(a.out);
    write_text(&dir.join("report.csv"), &report.to_csv())?;
    write_text(&dir.join("replications.csv"), &report.replications_csv())?;
    write_text(&dir.join("config.txt"), &format!("command=mise-sweep\n{}", cfg.to_kv()))?;
    print!("{}", report.to_csv());
    eprint!("{}", report.timing_summary());
    for s in &report.sizes {
        for (rep, reason) in &s.dropped {
            eprintln!("warning: n = {} replication {rep} dropped: {reason}", s.n);
        }
    }

    if let Some(max) = a.max_slope {
        let Some(fit) = &report.fit else {
            return Ok(Outcome::CheckFailed("no rate fit available".into()));
        };
        if fit.slope.is_nan() || fit.slope > max {
            return Ok(Outcome::CheckFailed(format!(
                "log-log slope {:.3} (95% CI {:.3}..{:.3}) exceeds {max}",
                fit.slope, fit.ci.0, fit.ci.1
            )));
        }
    }
    Ok(Outcome::Ok)
}

pub fn replicate_figure(a: FigureArgs) -> CliResult<Outcome> {
    let id: FigureId = a.figure.parse()?;
    let dir = out_dir(a.out);
    let (run, written) = harness::replicate_figure(id, a.seed, &dir)?;
    println!("figure {id}, seed {}, n = {}", run.seed, run.obs.n());
    println!("tau2:   N = {}, relative L2 error {:.4}", run.tau.selected_n, run.tau.relative_error);
    println!("sigma2: N = {}, relative L2 error {:.4}", run.sigma.selected_n, run.sigma.relative_error);
    if let Some(o) = run.overshoot {
        println!("overshoot near the jump: {o:.4}");
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(Outcome::Ok)
}

struct Row {
    check: &'static str,
    size: String,
    residual: f64,
    tolerance: f64,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Spectral identities against their dense or analytic oracles.
pub fn selfcheck() -> CliResult<Outcome> {
    let start = Instant::now();
    let mut rows = Vec::new();

    for n in [8usize, 64, 256] {
        rows.push(Row { check: "D Lambda D = K", size: n.to_string(), residual: diagonalization_residual(n)?, tolerance: 1e-10 });
    }

    let mut rng = stream_rng(0, 0, StreamRole::Noise);
    let mut normal = |len: usize| -> Vec<f64> { (0..len).map(|_| StandardNormal.sample(&mut rng)).collect() };
    for n in [17usize, 100, 257, 512] {
        let v = normal(n - 1);
        rows.push(Row {
            check: "fast vs dense DST",
            size: n.to_string(),
            residual: max_abs_diff(&dst_apply(&v)?, &naive_dst(&v)?),
            tolerance: 1e-10,
        });
    }

    let mut involution: f64 = 0.0;
    for len in 1..=4096usize {
        let v = normal(len);
        let t = SineTransform::new(len)?;
        involution = involution.max(max_abs_diff(&t.apply(&t.apply(&v)?)?, &v));
    }
    rows.push(Row { check: "D^2 v = v", size: "1..4096".into(), residual: involution, tolerance: 1e-10 });

    let sigma2 = FunctionSpec::from_flag("cos:2,0,0.5")?;
    for (n, k) in [(16usize, 0usize), (16, 3), (32, 0), (32, 3)] {
        rows.push(Row {
            check: "aliasing identity",
            size: format!("{n}, k = {k}"),
            residual: aliasing_identity_residual(&sigma2, k, n)?,
            tolerance: 1e-8,
        });
    }

    // √n Σ_{m+1}^{2m} λ_i = 7π²/3 + 3π²/(2m) + (π²/6 − 31π⁴/60)/m² + O(m⁻³) for n = m²
    let pi2 = PI * PI;
    for m in [100usize, 1000] {
        let n = m * m;
        let dev = (n as f64).sqrt() * eigensum_band(n, m + 1, 2 * m)? - STANDARD_BIAS;
        let want = 1.5 * pi2 + (pi2 / 6.0 - 31.0 * pi2 * pi2 / 60.0) / m as f64;
        rows.push(Row {
            check: "band eigensum expansion",
            size: n.to_string(),
            residual: (dev * m as f64 - want).abs(),
            tolerance: 0.01,
        });
    }

    println!("{:<26} {:>14} {:>12} {:>10}  status", "check", "n", "residual", "tolerance");
    let mut failed = Vec::new();
    for r in &rows {
        let ok = r.residual <= r.tolerance;
        println!(
            "{:<26} {:>14} {:>12.3e} {:>10.0e}  {}",
            r.check,
            r.size,
            r.residual,
            r.tolerance,
            if ok { "ok" } else { "FAIL" }
        );
        if !ok {
            failed.push(format!("{} at {}", r.check, r.size));
        }
    }
    println!("{} checks in {:.2} s", rows.len(), start.elapsed().as_secs_f64());
    if failed.is_empty() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::CheckFailed(failed.join("; ")))
    }
}
