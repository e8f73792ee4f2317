//! CLI-facing acceptance checks: byte-identical verification reports for a
//! fixed seed, and the committed configuration where optimal and robust
//! disclosure diverge.

use std::path::PathBuf;
use std::process::Command;

use disclose_core::{DisclosureVerdict, PrecisionChoice, RobustVerdict};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_disclose"))
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .and_then(|p| p.parent())
        .expect("crate lives two levels under the workspace root")
        .to_path_buf()
}

#[test]
fn a08_verification_report_is_byte_identical_across_runs() {
    let run = || {
        bin()
            .args(["verify", "--suite", "all", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success(), "verify must pass on the default battery");
    assert!(second.status.success());
    assert!(!first.stdout.is_empty());
    assert_eq!(
        first.stdout, second.stdout,
        "same seed must produce byte-identical reports"
    );
    println!("PASS criterion 8: verify --suite all --seed 7 is byte-identical across runs");
}

#[test]
fn a07_committed_divergence_config_splits_optimal_and_robust() {
    let config = workspace_root().join("configs/cournot_divergence.json");
    assert!(config.exists(), "missing committed config {config:?}");

    let out = bin()
        .args(["optimal", "--config", config.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let verdict: DisclosureVerdict = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict.optimal_tau_y, PrecisionChoice::Finite(0.0));

    let out = bin()
        .args([
            "robust",
            "--config",
            config.to_str().unwrap(),
            "--kappa",
            "inf",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let robust: RobustVerdict = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(robust.robust_tau_y, PrecisionChoice::Infinite);

    // The committed file matches the battery's built-in example.
    let (preset, cost) = disclose_core::checks::divergence_example();
    let text = std::fs::read_to_string(&config).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["alpha"].as_f64().unwrap(), preset.params.alpha());
    assert_eq!(parsed["beta"].as_f64().unwrap(), preset.params.beta());
    assert_eq!(
        parsed["tau_theta"].as_f64().unwrap(),
        preset.params.tau_theta()
    );
    assert_eq!(
        parsed["cost"]["lambda"].as_f64(),
        cost.constant_elasticity()
    );
    assert_eq!(parsed["cost"]["c"].as_f64(), cost.scale());
    println!("PASS criterion 7 (CLI): divergence config yields optimal 0, robust inf");
}
