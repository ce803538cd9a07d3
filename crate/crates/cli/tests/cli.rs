//! End-to-end tests of the binary: exit codes, report shapes, file
//! artifacts, and the environment overrides.

use std::path::Path;
use std::process::{Command, Output};

fn nlspec(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nlspec"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn predict_unit_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        r#"
[lame]
mu = 1.0
lambda = 1.0

[domain]
kind = "disk"
radius = 1.0

[output]
dir = "out"
"#,
    );
    let out = nlspec(
        &["predict", "--config", cfg.to_str().unwrap()],
        &[("NLSPEC_OUT_DIR", dir.path().join("out").to_str().unwrap())],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    let a0 = report["results"]["a0"].as_f64().unwrap();
    let a1 = report["results"]["a1"].as_f64().unwrap();
    assert!((a0 - 1.0 / 3.0).abs() < 1e-6);
    assert!((a1 - 0.698945).abs() < 1e-5);
    // report echoes inputs and environment
    assert_eq!(report["config"]["lame"]["mu"], 1.0);
    assert!(report["environment"]["out_dir_override"].is_string());
    assert!(dir.path().join("out/predict.json").exists());
}

#[test]
fn predict_laplacian_limit_square() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        r#"
[lame]
mu = 1.0
lambda = -1.0

[domain]
kind = "rectangle"
a = 1.0
b = 1.0
"#,
    );
    let out = nlspec(
        &["predict", "--config", cfg.to_str().unwrap()],
        &[("NLSPEC_OUT_DIR", dir.path().to_str().unwrap())],
    );
    assert!(out.status.success());
    let report = stdout_json(&out);
    let a0 = report["results"]["a0"].as_f64().unwrap();
    assert!((a0 - 2.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-9);
}

#[test]
fn unknown_config_key_is_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        r#"
[lame]
mu = 1.0
lambda = 1.0
nu = 0.3
"#,
    );
    let out = nlspec(&["predict", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nu"), "stderr: {err}");
}

#[test]
fn missing_spectrum_file_is_exit_1() {
    let out = nlspec(&["hear", "--spectrum", "/nonexistent/s.csv"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eigs_interval_writes_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        &format!(
            r#"
bc = "dirichlet"

[lame]
mu = 1.0
lambda = 0.0

[domain]
kind = "interval"
length = {}

[solver]
count = 300

[output]
dir = "{}"
"#,
            std::f64::consts::PI,
            dir.path().display()
        ),
    );
    let out = nlspec(&["eigs", "--config", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["results"]["count"], 300);
    let tau1 = report["results"]["tau_1"].as_f64().unwrap();
    assert!((tau1 - 2.0).abs() < 1e-12);
    let spectrum = nlspec_core::spectra::spectrum_import(&dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(spectrum.count(), 300);
}

#[test]
fn trace_fit_from_spectrum_file_and_plot_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        &format!(
            r#"
bc = "dirichlet"

[lame]
mu = 1.0
lambda = 0.0

[domain]
kind = "interval"
length = {pi}

[solver]
count = 300

[trace]
samples = 16

[output]
dir = "{dir}"
formats = ["json", "csv"]
"#,
            pi = std::f64::consts::PI,
            dir = dir.path().display()
        ),
    );
    let out = nlspec(&["eigs", "--config", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success());
    let spectrum_path = dir.path().join("spectrum.csv");
    let out = nlspec(
        &[
            "trace-fit",
            "--config",
            cfg.to_str().unwrap(),
            "--spectrum",
            spectrum_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["results"]["sign"], -1);
    let e0 = report["results"]["relative_errors"]["a0"].as_f64().unwrap();
    assert!(e0 < 1e-3, "a0 error {e0}");
    // plot data with header and one line per sample
    let plot = std::fs::read_to_string(dir.path().join("trace_fit.csv")).unwrap();
    assert!(plot.starts_with("t,value,fitted\n"));
    assert_eq!(plot.lines().count(), 17);
}

#[test]
fn hear_interval_is_a_one_dimensional_ball() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        &format!(
            r#"
bc = "dirichlet"

[lame]
mu = 1.0
lambda = 0.0

[domain]
kind = "interval"
length = {pi}

[solver]
count = 400

[output]
dir = "{dir}"
"#,
            pi = std::f64::consts::PI,
            dir = dir.path().display()
        ),
    );
    assert!(nlspec(&["eigs", "--config", cfg.to_str().unwrap()], &[]).status.success());
    let spectrum = dir.path().join("spectrum.csv");
    let out = nlspec(
        &["hear", "--spectrum", spectrum.to_str().unwrap()],
        &[("NLSPEC_OUT_DIR", dir.path().to_str().unwrap())],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    // Every interval is a 1-ball: ratio = boundary count = 2 = ball ratio.
    assert_eq!(report["results"]["verdict"], "Ball");
    let vol = report["results"]["vol_hat"].as_f64().unwrap();
    assert!((vol - std::f64::consts::PI).abs() / std::f64::consts::PI < 0.01);
}

#[test]
fn symbol_verify_passes_and_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        r#"
[lame]
mu = 1.0
lambda = 0.5

[symbol_verify]
trials = 200
seed = 11
fields = ["flat", "polar", "sphere"]
max_order = 2
"#,
    );
    let out = nlspec(
        &["symbol-verify", "--config", cfg.to_str().unwrap()],
        &[("NLSPEC_OUT_DIR", dir.path().to_str().unwrap())],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["seed"], 11);
    assert!(report["results"]["max_inverse_error"].as_f64().unwrap() < 1e-12);
    assert_eq!(report["results"]["pass"], true);
    // deterministic given config + seed
    let again = stdout_json(&nlspec(
        &["symbol-verify", "--config", cfg.to_str().unwrap()],
        &[("NLSPEC_OUT_DIR", dir.path().to_str().unwrap())],
    ));
    assert_eq!(report, again);
}

#[test]
fn symbol_verify_tau_on_ray_is_exit_1_with_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        r#"
[lame]
mu = 1.0
lambda = 1.0

[symbol_verify]
trials = 10
seed = 1
tau = [1.0, 0.0]
"#,
    );
    let out = nlspec(
        &["symbol-verify", "--config", cfg.to_str().unwrap()],
        &[("NLSPEC_OUT_DIR", dir.path().to_str().unwrap())],
    );
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["error"]["kind"], "PoleProximity");
}

#[test]
fn eigs_rectangle_neumann_has_rigid_modes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(
        &cfg,
        &format!(
            r#"
bc = "neumann"

[lame]
mu = 1.0
lambda = 1.0

[domain]
kind = "rectangle"
a = 1.0
b = 1.0

[solver]
grid_n = 16

[output]
dir = "{dir}"
"#,
            dir = dir.path().display()
        ),
    );
    let out = nlspec(&["eigs", "--config", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let spectrum = nlspec_core::spectra::spectrum_import(&dir.path().join("spectrum.csv")).unwrap();
    let vals = spectrum.expanded();
    let zeros = vals.iter().filter(|&&v| v < 1e-8 * vals[3]).count();
    assert_eq!(zeros, 3);
}
