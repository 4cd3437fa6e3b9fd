//! Runs every policy in a scenario config and prints the final cross-run
//! aggregates side by side.
//!
//!     cargo run --release --example compare_policies -- [config.json]
//!
//! Defaults to the bundled decreasing-trend scenario.

use trendbandit::{run_experiment, ExperimentConfig};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/decreasing.json").into());
    let cfg = ExperimentConfig::load(std::path::Path::new(&path)).expect("config should load");
    eprintln!(
        "running {} policies × {} runs × {} steps ...",
        cfg.policies.len(),
        cfg.runs,
        cfg.horizon
    );
    let result = run_experiment(&cfg).expect("experiment should run");

    println!("scenario: {}", cfg.scenario);
    println!("oracle gain: {:.2}", result.oracle.gain);
    println!(
        "{:<8} {:>14} {:>10} {:>14} {:>10} {:>10}",
        "policy", "reward(mean)", "(std)", "regret(mean)", "(std)", "agreement"
    );
    for agg in &result.aggregates {
        let last = agg.checkpoints.last().expect("at least one checkpoint");
        println!(
            "{:<8} {:>14.2} {:>10.2} {:>14.2} {:>10.2} {:>10.4}",
            agg.policy,
            last.mean_modulated,
            last.std_modulated,
            last.mean_regret,
            last.std_regret,
            last.mean_agreement
        );
    }
}
