//! Evaluates the logarithmic regret bound on a 2-arm flat-trend instance and
//! sets it against simulated regret at several horizons.
//!
//!     cargo run --release --example regret_bound

use trendbandit::{greedy_oracle, regret_bound, run_experiment, ExperimentConfig};

fn main() {
    println!(
        "{:>8} {:>16} {:>16} {:>10}",
        "T", "mean regret", "bound", "slack"
    );
    for horizon in [1_000u64, 4_000, 16_000, 64_000] {
        let cfg = ExperimentConfig::from_json_str(&format!(
            r#"{{
                "scenario": "bound-demo",
                "means": [0.6, 0.4],
                "trend": {{"kind": "constant", "params": [1.0]}},
                "horizon": {horizon},
                "runs": 20,
                "checkpoint_interval": {horizon},
                "master_seed": 42,
                "policies": [{{"name": "aucb"}}]
            }}"#
        ))
        .expect("config is valid");
        let result = run_experiment(&cfg).expect("experiment should run");
        let trend = cfg.build_trend().expect("trend is valid");
        let oracle = greedy_oracle(&cfg.means, &trend, horizon).expect("means are valid");

        // The bound depends on which arms a run over-pulled; here every run
        // over-pulls only the inferior arm, so any run's counts give it.
        let report = regret_bound(&cfg.means, &trend, &oracle, &result.runs[0].final_counts)
            .expect("counts match arm count");
        let bound = report.bound.expect("positive gap on this instance");
        let mean_regret = result.aggregates[0]
            .checkpoints
            .last()
            .expect("one checkpoint")
            .mean_regret;
        println!(
            "{:>8} {:>16.2} {:>16.2} {:>9.1}x",
            horizon,
            mean_regret,
            bound,
            bound / mean_regret
        );
    }
    println!("\nthe bound grows with ln T while simulated regret flattens once");
    println!("the inferior arm is effectively ruled out.");
}
