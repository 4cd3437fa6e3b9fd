//! Runs a small experiment and writes the full artifact set — runs.csv,
//! aggregate.csv, counts.csv, manifest.json — then reads the manifest back
//! and re-verifies every file hash.
//!
//!     cargo run --example write_artifacts -- [out_dir]

use std::path::PathBuf;

use sha2::{Digest, Sha256};
use trendbandit::output::write_outputs;
use trendbandit::{run_experiment, ExperimentConfig};

fn main() {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);

    let cfg = ExperimentConfig::from_json_str(
        r#"{
            "scenario": "artifact-demo",
            "means": [0.6, 0.4, 0.1],
            "trend": {"kind": "log-decreasing", "params": [-6.65, 9.57], "floor": 0.35},
            "horizon": 2000,
            "runs": 5,
            "checkpoint_interval": 500,
            "master_seed": 11,
            "policies": [{"name": "aucb"}, {"name": "ucb1"}]
        }"#,
    )
    .expect("config is valid");

    let result = run_experiment(&cfg).expect("experiment should run");
    let paths = write_outputs(&result, &cfg, &out_dir).expect("output dir is writable");
    for path in &paths {
        println!("wrote {}", path.display());
    }

    // Read the manifest back and recheck the recorded digests.
    let manifest_path = paths.last().expect("manifest is always written");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).expect("manifest readable"))
            .expect("manifest is JSON");
    println!(
        "\ntool: {} {}",
        manifest["tool"]["name"].as_str().unwrap_or("?"),
        manifest["tool"]["version"].as_str().unwrap_or("?")
    );
    for (name, recorded) in manifest["files"].as_object().expect("files map") {
        let bytes = std::fs::read(out_dir.join(name)).expect("listed file exists");
        let recomputed = hex::encode(Sha256::digest(&bytes));
        let ok = recorded.as_str() == Some(recomputed.as_str());
        println!("{name}: {} ({})", recorded.as_str().unwrap_or("?"), if ok { "verified" } else { "MISMATCH" });
        assert!(ok, "{name} hash drifted");
    }
}
