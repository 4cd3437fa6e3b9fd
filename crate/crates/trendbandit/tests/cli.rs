//! End-to-end tests of the `trendbandit` binary: flag handling, exit codes,
//! output-directory resolution, and the files written by `run`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use trendbandit::output::parse_runs_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trendbandit"))
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path
}

/// A 2-arm flat-trend config small enough that `run` finishes instantly.
const TINY: &str = r#"{
    "scenario": "tiny",
    "means": [0.6, 0.4],
    "trend": {"kind": "constant", "params": [1.0]},
    "horizon": 40,
    "runs": 2,
    "checkpoint_interval": 20,
    "master_seed": 5,
    "policies": [{"name": "aucb"}]
}"#;

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

// ── usage and exit codes ─────────────────────────────────────────────────────

#[test]
fn help_prints_usage_and_exits_zero() {
    let out = bin().arg("help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("usage: trendbandit"));
}

#[test]
fn missing_command_is_a_usage_error() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("no command given"));
    assert!(err.contains("usage: trendbandit"), "usage text should follow");
}

#[test]
fn unknown_command_and_unknown_flag_exit_one() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("unknown command \"frobnicate\""));

    let out = bin().args(["run", "--bogus", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("unknown argument \"--bogus\""));
}

#[test]
fn missing_config_file_exits_one() {
    let out = bin()
        .args(["oracle", "--config", "/no/such/file.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("/no/such/file.json"));
}

#[test]
fn misspelled_config_field_exits_one_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "typo.json",
        r#"{"means": [0.5], "trend": {"kind": "constant", "params": [1.0]}, "horizont": 10}"#,
    );
    let out = bin()
        .args(["oracle", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("horizont"));
}

#[test]
fn overflowing_trend_is_a_domain_error_naming_the_step() {
    // e^{1.15 n} leaves f64 range at n = 618, inside this cap.
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "overflow.json",
        r#"{
            "means": [0.5],
            "trend": {"kind": "exp-growth", "params": [0.037, 1.15]},
            "horizon": 1000
        }"#,
    );
    let out = bin()
        .args(["trend", "--config", cfg.to_str().unwrap(), "--max-n", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("n = 618"), "stderr: {}", stderr_of(&out));
}

// ── analytic subcommands ─────────────────────────────────────────────────────

#[test]
fn trend_table_lists_value_and_running_sum() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "flat.json",
        r#"{"means": [0.5], "trend": {"kind": "constant", "params": [2.5]}, "horizon": 10}"#,
    );
    let out = bin()
        .args(["trend", "--config", cfg.to_str().unwrap(), "--max-n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec!["n,trend,cumulative", "1,2.5,2.5", "2,2.5,5", "3,2.5,7.5"]
    );
}

#[test]
fn oracle_schedule_on_flat_trend_goes_to_best_arm() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "oracle.json",
        r#"{"means": [0.7, 0.2], "trend": {"kind": "constant", "params": [1.0]}, "horizon": 10}"#,
    );
    let out = bin()
        .args(["oracle", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("horizon: 10"));
    assert!(text.contains("expected gain: 7"));
    assert!(text.contains("arm 0: mean 0.7, oracle pulls 10"));
    assert!(text.contains("arm 1: mean 0.2, oracle pulls 0"));
}

#[test]
fn bound_tags_contributing_arms_and_reports_regret() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bound.json",
        r#"{"means": [0.6, 0.4], "trend": {"kind": "constant", "params": [1.0]}, "horizon": 1000}"#,
    );
    let out = bin()
        .args([
            "bound",
            "--config",
            cfg.to_str().unwrap(),
            "--counts",
            "960,40",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("arm 1: effective gap 0.19999999999999996 (contributing)"));
    assert!(!text.contains("arm 0: effective gap 0 (contributing)"));
    assert!(text.contains("bound: 832.22"));
    // counts sum to the horizon, so the realised regret is printed too
    assert!(text.contains("expected regret of these counts: 8"));
}

#[test]
fn bound_reports_undefined_when_a_contributing_gap_is_non_positive() {
    // Trend drops to half after the first pull; the runner-up mean 0.55
    // exceeds the trend-adjusted best (0.5·0.6), so its gap is negative.
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "undef.json",
        r#"{
            "means": [0.6, 0.55],
            "trend": {"kind": "tabulated", "params": [1.0, 0.5]},
            "horizon": 4
        }"#,
    );
    let out = bin()
        .args([
            "bound",
            "--config",
            cfg.to_str().unwrap(),
            "--counts",
            "1,3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("bound: undefined"));
}

#[test]
fn bound_rejects_count_vectors_of_the_wrong_length() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "short.json",
        r#"{"means": [0.6, 0.4], "trend": {"kind": "constant", "params": [1.0]}, "horizon": 10}"#,
    );
    let out = bin()
        .args([
            "bound",
            "--config",
            cfg.to_str().unwrap(),
            "--counts",
            "1,2,3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("needs 2 entries"));
}

// ── output-directory resolution ──────────────────────────────────────────────

#[test]
fn out_dir_defaults_to_out_in_the_working_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tiny.json", TINY);
    let out = bin()
        .args(["run", "--config", cfg.to_str().unwrap()])
        .current_dir(tmp.path())
        .env_remove("TRENDBANDIT_OUT_DIR")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(tmp.path().join("out/runs.csv").exists());
}

#[test]
fn out_dir_env_var_is_the_fallback() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tiny.json", TINY);
    let env_dir = tmp.path().join("from-env");
    let out = bin()
        .args(["run", "--config", cfg.to_str().unwrap()])
        .env("TRENDBANDIT_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    for file in ["runs.csv", "aggregate.csv", "counts.csv", "manifest.json"] {
        assert!(env_dir.join(file).exists(), "{file} missing from env dir");
    }
}

#[test]
fn out_dir_flag_beats_the_env_var() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tiny.json", TINY);
    let env_dir = tmp.path().join("loses");
    let flag_dir = tmp.path().join("wins");
    let out = bin()
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            flag_dir.to_str().unwrap(),
        ])
        .env("TRENDBANDIT_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(flag_dir.join("runs.csv").exists());
    assert!(!env_dir.exists());
}

// ── run artifacts ────────────────────────────────────────────────────────────

#[test]
fn run_writes_parseable_csv_and_a_manifest_with_matching_hashes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tiny.json", TINY);
    let out_dir = tmp.path().join("artifacts");
    let out = bin()
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("scenario: tiny"));
    assert!(text.contains("ran 1 policies × 2 runs × 40 steps (seed 5)"));

    // 1 policy × 2 runs × 2 checkpoints
    let runs_text = fs::read_to_string(out_dir.join("runs.csv")).unwrap();
    let rows = parse_runs_csv(&runs_text).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.policy == "aucb"));
    assert_eq!(rows[0].checkpoint_t, 20);
    assert_eq!(rows[1].checkpoint_t, 40);

    // every file listed in the manifest hashes to the recorded digest
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"]["name"], "trendbandit");
    let files = manifest["files"].as_object().unwrap();
    assert_eq!(files.len(), 3);
    for (name, digest) in files {
        let bytes = fs::read(out_dir.join(name)).unwrap();
        let recomputed = hex::encode(Sha256::digest(&bytes));
        assert_eq!(digest.as_str().unwrap(), recomputed, "{name} hash drifted");
    }
}

#[test]
fn seed_and_policy_overrides_reach_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "tiny.json", TINY);
    let out_dir = tmp.path().join("override");
    let out = bin()
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
            "--seed",
            "7",
            "--policies",
            "aucb,exp3:gamma=0.25",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    let config = &manifest["config"];
    assert_eq!(config["master_seed"], 7);
    let policies = config["policies"].as_array().unwrap();
    assert_eq!(policies.len(), 2);
    assert_eq!(policies[0]["name"], "aucb");
    assert_eq!(policies[1]["name"], "exp3");
    assert_eq!(policies[1]["params"]["gamma"], 0.25);
}
