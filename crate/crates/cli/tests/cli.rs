use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn spotvol(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spotvol"))
        .args(args)
        .current_dir(cwd)
        .env_remove("SPOTVOL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn simulate(dir: &Path, out: &str, extra: &[&str]) -> Output {
    let mut args = vec!["simulate", "--model", "tbm", "--sigma2", "const:1", "--tau2", "const:0.01", "--n", "1024"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", out]);
    spotvol(&args, dir)
}

#[test]
fn selfcheck_passes() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(&["selfcheck"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = stdout(&o);
    assert!(table.contains("residual") && table.contains("D Lambda D = K"));
    assert!(!table.contains("FAIL"));
}

#[test]
fn small_n_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(&["estimate-sigma", "--n", "10", "--input", "whatever.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n must exceed 16"), "{}", stderr(&o));
}

#[test]
fn simulate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["--seed", "7"];
    assert!(simulate(dir.path(), "a.csv", &args).status.success());
    assert!(simulate(dir.path(), "b.csv", &args).status.success());
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert!(simulate(dir.path(), "c.csv", &["--seed", "8"]).status.success());
    assert_ne!(a, fs::read(dir.path().join("c.csv")).unwrap());
}

#[test]
fn simulate_config_file_and_flag_override() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sim.txt"), "model = tbm\nn = 200\nseed = 3\nsigma2 = cos:2,0,0.5\ntau2 = const:1e-4\n").unwrap();
    let o = spotvol(&["simulate", "--config", "sim.txt", "--n", "300", "--out", "s.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = fs::read_to_string(dir.path().join("s.csv")).unwrap().lines().count();
    assert_eq!(rows, 301);
    let side = fs::read_to_string(dir.path().join("s.csv.config.txt")).unwrap();
    for line in ["n=300", "seed=3", "sigma2=cos:2,0,0.5", "noise=gaussian", "replication=0"] {
        assert!(side.contains(line), "{side}");
    }
}

#[test]
fn round_trip_simulate_then_estimate() {
    let dir = TempDir::new().unwrap();
    assert!(simulate(dir.path(), "obs.csv", &["--seed", "1"]).status.success());
    let o = spotvol(&["estimate-tau", "--input", "obs.csv", "--N", "2", "--grid", "50", "--out", "tau.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));

    let text = fs::read_to_string(dir.path().join("tau.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,estimate"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 51);
    assert_eq!(rows[0].0, 0.0);
    assert_eq!(rows[50].0, 1.0);
    // τ² = 0.01 plus the signal leakage of a few percent
    for (_, v) in &rows {
        assert!(*v > 0.005 && *v < 0.02, "{v}");
    }

    let theta = fs::read_to_string(dir.path().join("tau.csv.theta.csv")).unwrap();
    assert_eq!(theta.lines().count(), 4);
    let config = fs::read_to_string(dir.path().join("tau.csv.config.txt")).unwrap();
    for key in ["log_base=2", "tau_rule=standard", "tau_start=102", "N=2", "n=1024"] {
        assert!(config.contains(key), "{config}");
    }

    let o = spotvol(&["estimate-sigma", "--input", "obs.csv", "--N", "1", "--out", "-"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("t,estimate\n"));
}

#[test]
fn output_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_spotvol"))
        .args(["simulate", "--sigma2", "const:1", "--tau2", "const:0", "--n", "64"])
        .current_dir(dir.path())
        .env("SPOTVOL_OUT_DIR", dir.path().join("env_out"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("env_out/simulate.csv").exists());
}

#[test]
fn help_documents_conventions() {
    let dir = TempDir::new().unwrap();
    for sub in ["simulate", "estimate-tau", "estimate-sigma", "mise-sweep", "replicate-figure", "selfcheck"] {
        let o = spotvol(&[sub, "--help"], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let help = stdout(&o);
        assert!(help.contains("log2"), "{sub}");
        assert!(help.contains("[n/log2 n]") && help.contains("[sqrt n]+1 .. 2[sqrt n]"), "{sub}");
    }
}

#[test]
fn unknown_flag_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(&["estimate-tau", "--bogus", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--bogus"));
}

#[test]
fn missing_input_names_the_path() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(&["estimate-tau", "--input", "absent.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.csv"));
}

#[test]
fn malformed_csv_names_the_field() {
    let dir = TempDir::new().unwrap();
    let mut body = String::from("i,t,y\n");
    for i in 1..=40 {
        body.push_str(&format!("{i},{},{}\n", i as f64 / 40.0, if i == 7 { "oops".into() } else { i.to_string() }));
    }
    fs::write(dir.path().join("bad.csv"), body).unwrap();
    let o = spotvol(&["estimate-sigma", "--input", "bad.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 8") && err.contains("`y`") && err.contains("oops"), "{err}");
}

#[test]
fn tau_cutoff_rejected_for_tau() {
    let dir = TempDir::new().unwrap();
    assert!(simulate(dir.path(), "obs.csv", &[]).status.success());
    let o = spotvol(&["estimate-tau", "--input", "obs.csv", "--tau-cutoff", "tilde"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--tau-cutoff"));
}

#[test]
fn mise_sweep_writes_report() {
    let dir = TempDir::new().unwrap();
    let args = [
        "mise-sweep", "--scenario", "const-tau", "--kind", "tau", "--n-list", "256,512,1024", "--reps", "20",
        "--n-rule", "fixed:0", "--seed", "4", "--out", "sweep",
    ];
    let o = spotvol(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("sweep/report.csv")).unwrap();
    assert!(report.starts_with("record,n,mise_mean"));
    assert_eq!(report.lines().filter(|l| l.starts_with("mise,")).count(), 3);
    assert!(report.lines().any(|l| l.starts_with("slope,")));
    let config = fs::read_to_string(dir.path().join("sweep/config.txt")).unwrap();
    assert!(config.contains("reps=20") && config.contains("n_rule=fixed:0"), "{config}");

    let again = spotvol(&args, dir.path());
    assert!(again.status.success());
    assert_eq!(report, fs::read_to_string(dir.path().join("sweep/report.csv")).unwrap());
}

#[test]
fn mise_sweep_slope_check_fails_with_code_2() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(
        &[
            "mise-sweep", "--scenario", "const-tau", "--kind", "tau", "--n-list", "256,512,1024", "--reps", "20",
            "--n-rule", "fixed:0", "--max-slope", "-5", "--out", "sweep",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("slope"));
}

#[test]
fn replicate_figure_writes_panels() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(&["replicate-figure", "fig2", "--seed", "1", "--out", "figs"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["raw", "latent", "tau", "sigma", "summary"] {
        assert!(dir.path().join(format!("figs/fig2_{name}.csv")).exists(), "{name}");
    }
    let raw = fs::read_to_string(dir.path().join("figs/fig2_raw.csv")).unwrap();
    assert_eq!(raw.lines().count(), 25_001);

    // the raw panel feeds straight back into the estimators
    let o = spotvol(&["estimate-sigma", "--input", "figs/fig2_raw.csv", "--N", "3", "--out", "s.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn unknown_figure_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = spotvol(&["replicate-figure", "fig9"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fig9"));
}
