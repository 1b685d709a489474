use std::path::Path;
use std::process::{Command, Output};

fn weno(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weno")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let headers = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines
        .map(|l| l.split(',').map(|s| if s.is_empty() { f64::NAN } else { s.parse().unwrap() }).collect())
        .collect();
    (headers, rows)
}

#[test]
fn convergence_table_orders_follow_from_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(&["convergence", "--n", "20,40,80"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (headers, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(headers, ["n", "l1_error", "l1_order", "linf_error", "linf_order"]);
    assert_eq!(rows.len(), 3);
    assert!(rows[0][2].is_nan());
    for w in rows.windows(2) {
        assert!((w[1][2] - (w[0][1] / w[1][1]).log2()).abs() < 1e-12);
        assert!((w[1][4] - (w[0][3] / w[1][3]).log2()).abs() < 1e-12);
    }
    assert!(rows[2][2] > 4.5);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["reconstruct-study", "--scheme", "js5", "--n", "25,50,100"];
    let a = weno(&args, dir.path());
    let b = weno(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_dir_receives_named_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(&["weights-trace", "--n", "40", "--out", "tables"], dir.path());
    assert!(out.status.success());
    let path = dir.path().join("tables/weights-weights-trace-ud5-p2-fixed1e-16.csv");
    let (headers, rows) = parse_csv(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(headers[0], "x");
    assert_eq!(rows.len(), 40);
    for r in &rows {
        assert!((r[1] + r[2] + r[3] - 1.0).abs() < 1e-14);
    }
}

#[test]
fn epsilon_sweep_emits_one_block_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(&["epsilon-sweep", "--eps-list", "fixed:1e-6,scaled:2", "--n", "40,80"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let tags: Vec<(f64, f64, f64)> = rows.iter().map(|r| (r[0], r[1], r[2])).collect();
    assert_eq!(tags, [(0.0, 1e-6, 40.0), (0.0, 1e-6, 80.0), (1.0, 2.0, 40.0), (1.0, 2.0, 80.0)]);
}

#[test]
fn run1d_writes_profile_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(&["run1d", "--problem", "sod", "--n", "50", "--out", "."], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["completed"], true);
    assert_eq!(report["t_reached"], 1.3);
    assert!(report["min_density"].as_f64().unwrap() > 0.0);
    let (headers, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("sod.csv")).unwrap());
    assert_eq!(headers, ["x", "rho", "u", "p"]);
    assert_eq!(rows.len(), 50);
}

#[test]
fn run2d_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(&["run2d", "--problem", "riemann2d", "--n", "16", "--out", "."], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (headers, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("riemann2d.csv")).unwrap());
    assert_eq!(headers, ["x", "y", "rho", "u", "v", "p"]);
    assert_eq!(rows.len(), 256);
}

#[test]
fn inadmissible_run_exits_2_and_keeps_last_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(
        &["run1d", "--problem", "shu-osher", "--scheme", "linear", "--cfl", "0.9", "--n", "100", "--out", "."],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["completed"], false);
    assert!(report["t_reached"].as_f64().unwrap() < 1.8);
    let (_, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("shu-osher.csv")).unwrap());
    assert!(rows.iter().flatten().all(|v| v.is_finite()));
}

#[test]
fn configuration_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["convergence", "--scheme", "weno7"][..],
        &["convergence", "--eps", "tiny"],
        &["convergence", "--p", "0.5"],
        &["convergence", "--problem", "sod"],
        &["run1d", "--problem", "nope"],
        &["run1d", "--problem", "riemann2d"],
        &["run1d", "--problem", "sod", "--cfl", "3"],
        &["run1d", "--problem", "sod", "--cfl", "0.5", "--dt-const", "0.1"],
        &["frobnicate"],
    ] {
        let out = weno(args, dir.path());
        assert_eq!(out.status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn print_config_echoes_and_runs_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(
        &[
            "run1d",
            "--problem",
            "lax",
            "--scheme",
            "js5",
            "--eps",
            "scaled:2",
            "--p",
            "1",
            "--print-config",
            "--out",
            ".",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let cfg: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cfg["options"]["scheme"]["variant"], "js5");
    assert_eq!(cfg["options"]["scheme"]["epsilon"]["kind"], "scaled");
    assert_eq!(cfg["options"]["scheme"]["p"], 1.0);
    assert!(!dir.path().join("lax.csv").exists());
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno(&["--help"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("reconstruct-study"));
}
