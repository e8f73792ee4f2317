//! End-to-end CLI tests through the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use disclose_core::checks::VerificationReport;
use disclose_core::welfare::EquilibriumSolution;
use disclose_core::{DisclosureVerdict, PrecisionChoice, RobustVerdict};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_disclose"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write_config(dir: &tempfile::TempDir, json: &str) -> PathBuf {
    let path = dir.path().join("model.json");
    std::fs::write(&path, json).unwrap();
    path
}

const UNIT_MODEL: &str = r#"{
    "alpha": 0.0, "beta": 1.0, "tau_theta": 1.0, "theta_bar": 0.0,
    "cost": {"kind": "isoelastic", "c": 0.1111111111111111, "lambda": 1.0},
    "welfare": {"zeta": 1.0, "eta": 1.0}
}"#;

#[test]
fn solve_reports_the_unit_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, UNIT_MODEL);
    let out = run(&["solve", "--config", path.to_str().unwrap(), "--tau-y", "1"]);
    assert!(out.status.success());
    let row: EquilibriumSolution = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((row.tau_x - 1.0).abs() < 1e-8);
    assert!((row.welfare - 11.0 / 18.0).abs() < 1e-8);
    assert!(row.additive_constant_dropped);
}

#[test]
fn solve_corner_with_expensive_linear_cost() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
            "cost": {"kind": "linear", "c": 1.0},
            "welfare": {"zeta": 1.0, "eta": 1.0}}"#,
    );
    let out = run(&["solve", "--config", path.to_str().unwrap(), "--tau-y", "0"]);
    assert!(out.status.success());
    let row: EquilibriumSolution = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(row.tau_x, 0.0);
    assert_eq!(row.dispersion, 0.0);
    assert_eq!(row.cost, 0.0);
}

#[test]
fn malformed_config_exits_2_with_machine_readable_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "{not json");
    let out = run(&["solve", "--config", path.to_str().unwrap(), "--tau-y", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(err["error"]["kind"], "config");
}

#[test]
fn missing_model_and_infinite_tau_y_exit_2() {
    let out = run(&["solve", "--tau-y", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, UNIT_MODEL);
    let out = run(&["solve", "--config", path.to_str().unwrap(), "--tau-y", "inf"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_pins_the_csv_column_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
            "cost": {"kind": "linear", "c": 0.04},
            "welfare": {"zeta": 1.0, "eta": 1.0}}"#,
    );
    let out = run(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--grid",
        "1:9:3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "tau_y,tau_x,b_x,b_y,V,D,cost,W,W_gross,mwd,mwd0,mwd_star,mvd,rho"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    // Interior at tau_y = 1: all 14 cells populated.
    assert_eq!(rows[0].split(',').count(), 14);
    assert!(!rows[0].ends_with(','));
    // Corner rows (tau_y = 5, 9 with phi = 0) leave the MWD cells empty.
    for corner in &rows[1..] {
        assert!(corner.ends_with(",,,,"), "corner row: {corner}");
    }
}

#[test]
fn sweep_rejects_degenerate_grids() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, UNIT_MODEL);
    for grid in ["1:2:1", "2:1:10", "1:2:0", "1:2:10:bogus"] {
        let out = run(&["sweep", "--config", path.to_str().unwrap(), "--grid", grid]);
        assert_eq!(out.status.code(), Some(2), "grid {grid} should be rejected");
    }
}

#[test]
fn sweep_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, UNIT_MODEL);
    let out = run(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--grid",
        "0.5:2:4:log",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert!(rows[0]["mwd"]["mwd"].is_number());
}

#[test]
fn optimal_verdict_round_trips() {
    let out = run(&[
        "optimal",
        "--preset",
        "cournot",
        "--delta",
        "10",
        "--lambda",
        "1",
        "--c",
        "0.2",
    ]);
    assert!(out.status.success());
    let verdict: DisclosureVerdict = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict.optimal_tau_y, PrecisionChoice::Finite(0.0));
    assert_eq!(verdict.region, Some(disclose_core::Region::CornerCompare));
}

#[test]
fn robust_verdict_round_trips_and_matches_peak() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
            "cost": {"kind": "linear", "c": 0.04},
            "welfare": {"zeta": 0.0, "eta": -0.1}}"#,
    );
    let out = run(&[
        "robust",
        "--config",
        path.to_str().unwrap(),
        "--kappa",
        "1",
    ]);
    assert!(out.status.success());
    let verdict: RobustVerdict = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict.robust_tau_y, PrecisionChoice::Finite(16.0));
    assert_eq!(verdict.g_kappa, Some(16.0));
}

#[test]
fn robust_with_zero_volatility_weight_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
            "cost": {"kind": "linear", "c": 0.04},
            "welfare": {"zeta": 2.0, "eta": 0.0}}"#,
    );
    let out = run(&["robust", "--config", path.to_str().unwrap(), "--kappa", "2"]);
    assert!(out.status.success(), "eta = 0 answers via the grid, exit 0");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "non-applicable");
    assert!(v["warning"].as_str().unwrap().contains("eta"));
    assert!(v["grid_robust_tau_y"].is_number() || v["grid_robust_tau_y"] == "inf");
}

#[test]
fn classify_reports_region_and_monotonicity() {
    let out = run(&["classify", "--preset", "beauty", "--r", "0.5", "--lambda", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["region"], "II_corner_compare");
    assert_eq!(v["cost_free_monotonicity"], "cost_dependent");
}

#[test]
fn app_reports_thresholds_and_passing_corollaries() {
    let out = run(&["app", "--preset", "beauty", "--r", "0.25", "--lambda", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["thresholds"]["r_star"].as_f64().unwrap(), 2.0 / 3.0);
    assert_eq!(v["thresholds"]["r_gross"].as_f64().unwrap(), 1.0 / 3.0);
    assert_eq!(v["corollaries"]["passed"], true);
    assert_eq!(v["gross_optimal"]["region"], "I_full");
}

#[test]
fn verify_subsuite_report_round_trips() {
    let out = run(&["verify", "--suite", "corollaries", "--seed", "11"]);
    assert!(out.status.success());
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.passed);
    assert_eq!(report.seed, 11);
    assert!(!report.checks.is_empty());
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, UNIT_MODEL);
    let target = dir.path().join("row.json");
    let out = run(&[
        "solve",
        "--config",
        path.to_str().unwrap(),
        "--tau-y",
        "1",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let row: EquilibriumSolution =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert!((row.tau_x - 1.0).abs() < 1e-8);
}

#[test]
fn thread_cap_env_var_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, UNIT_MODEL);
    let out = bin()
        .env("DISCLOSE_THREADS", "1")
        .args(["sweep", "--config", path.to_str().unwrap(), "--grid", "0.5:2:8"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 9);
}
