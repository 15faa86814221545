//! Command-line contract: artifacts, report shapes, and the exit-code
//! convention (0 converged/ok, 2 config error, 3 non-convergence, 4
//! property violation).

use std::path::Path;
use std::process::{Command, Output};

use mec_offload::config::ExperimentConfig;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mec-offload")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn small_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default_preset();
    cfg.topology.num_bs = 2;
    cfg.topology.users_per_cell = 2;
    cfg.topology.num_channels = 2;
    cfg.user_defaults.alpha_t = 1.0;
    cfg.poa.exhaustive_limit = 4;
    cfg
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> String {
    let path = dir.join("exp.toml");
    std::fs::write(&path, cfg.to_toml_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn preset_output_is_a_valid_config() {
    let out = run(&["preset"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = ExperimentConfig::from_toml_str(&text).unwrap();
    assert_eq!(parsed.topology.num_bs, 5);
    assert_eq!(parsed.radio.channel_bandwidth_hz, 5e6);
}

#[test]
fn run_writes_artifacts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_config());
    let out_dir = dir.path().join("artifacts");
    let out = run(&[
        "run",
        "--config",
        &config,
        "--seed",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["converged"], serde_json::Value::Bool(true));
    assert!(summary["final_potential"].as_f64().unwrap() > 0.0);

    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(trace.starts_with("round,potential,offloaders"));
    assert!(trace.lines().count() >= 2);
}

#[test]
fn missing_and_malformed_configs_exit_two() {
    let out = run(&["run", "--config", "/nonexistent/exp.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    let out = run(&["run", "--config", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("topology"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "topology = \"not a table\"\n").unwrap();
    let out = run(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_sweep_axis_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_config());
    let out = run(&[
        "sweep", "--config", &config, "--axis", "bogus", "--values", "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown sweep axis"));
}

/// Two symmetric users who each offload only while the other is silent:
/// simultaneous updates two-cycle forever.
fn oscillating_config() -> ExperimentConfig {
    let mut cfg = small_config();
    cfg.topology.users_per_cell = 1;
    cfg.topology.num_channels = 1;
    cfg.radio.interference_scale = 2000.0;
    cfg.seed = 3;
    cfg
}

#[test]
fn parallel_oscillation_exits_three_with_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &oscillating_config());
    let out_dir = dir.path().join("artifacts");
    let out = run(&[
        "run",
        "--config",
        &config,
        "--schedule",
        "parallel",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    // The partial trace is retained for inspection.
    assert!(out_dir.join("trace.csv").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["converged"], serde_json::Value::Bool(false));

    // The same instance resolves under the sequential default.
    let out = run(&["run", "--config", &config, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validate_reports_properties_and_flags_violations() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_config());
    let out = run(&["validate", "--config", &config, "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    let names: Vec<&str> = report["properties"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "exact_potential",
            "convergence",
            "equilibrium_fixed_point",
            "profile_feasibility"
        ]
    );

    // A schedule that cannot settle turns the convergence property red and
    // the exit code into a property violation.
    let mut cfg = oscillating_config();
    cfg.engine.schedule = mec_offload::Schedule::Parallel;
    let config = write_config(dir.path(), &cfg);
    let out = run(&["validate", "--config", &config, "--trials", "50"]);
    assert_eq!(out.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(false));
    assert!(String::from_utf8_lossy(&out.stderr).contains("replay"));
}

#[test]
fn poa_artifacts_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_config());
    let out_dir = dir.path().join("artifacts");
    let out = run(&[
        "poa",
        "--config",
        &config,
        "--seed",
        "4",
        "--out",
        out_dir.to_str().unwrap(),
        "--multipliers",
        "0.5,1,2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("poa.json")).unwrap()).unwrap();
    let poa = report["poa"].as_f64().unwrap();
    assert!(poa >= 1.0 - 1e-9);
    assert!(poa <= report["bound_upper"].as_f64().unwrap() + 1e-9);

    let sweep = std::fs::read_to_string(out_dir.join("poa_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 4);
    assert!(sweep.starts_with("interference_multiplier,inv_sinr,poa"));
}

#[test]
fn sweep_uses_config_entries_when_no_axis_given() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config();
    cfg.sweep.push(mec_offload::config::SweepSpec {
        axis: "interference_scale".into(),
        values: vec![1.0, 8.0],
        seeds: 2,
    });
    let config = write_config(dir.path(), &cfg);
    let out_dir = dir.path().join("artifacts");
    let out = run(&["sweep", "--config", &config, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("sweep_interference_scale.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5, "2 values x 2 seeds plus header");

    // With no flags and no [[sweep]] entries there is nothing to run.
    let bare = write_config(dir.path(), &small_config());
    let out = run(&["sweep", "--config", &bare]);
    assert_eq!(out.status.code(), Some(2));
}
