//! Simulator for multi-armed bandits whose rewards follow a *known trend* in
//! each arm's own pull count: pulling arm `i` for the `s`-th time pays
//! `r · D(s)`, where `r` is a Bernoulli draw with unknown mean `μ_i` and `D`
//! is a known modulation function (decaying novelty, ramp-up, a one-off
//! sweet spot, ...).
//!
//! The crate provides:
//!
//! * [`trend`] — trend shapes with cached values, running sums and extrema;
//! * [`env`] — the simulated Bernoulli environment;
//! * [`policy`] — a trend-aware UCB plus four trend-blind baselines
//!   (UCB1, EXP3, sliding-window UCB, discounted UCB);
//! * [`oracle`] — greedy dynamic-oracle schedules, expected-regret
//!   accounting and a logarithmic regret bound for the trend-aware policy;
//! * [`config`] / [`harness`] / [`output`] — reproducible multi-run
//!   experiments from JSON configs to hashed CSV artifacts;
//! * [`cli`] — the `trendbandit` binary's command dispatch.
//!
//! The `examples/` directory walks through each capability; start with
//! `compare_policies`.

pub mod cli;
pub mod config;
pub mod env;
pub mod harness;
pub mod oracle;
pub mod output;
pub mod policy;
pub mod trend;

pub use config::{ConfigError, ExperimentConfig, PolicySpec, TrendSpec};
pub use env::{ArmSpec, BanditEnvironment, EnvError, Outcome};
pub use harness::{
    aggregate, run_experiment, run_seed, run_single, AggregateRecord, CheckpointRow,
    ExperimentResult, RunError, RunRecord,
};
pub use oracle::{
    exhaustive_oracle, expected_gain, expected_regret, greedy_oracle, greedy_trajectory,
    regret_bound, BoundReport, OracleError, OracleSchedule, OracleTrajectory, RegretReport,
};
pub use policy::{build_policy, AUcb, DUcb, Exp3, Policy, PolicyError, SwUcb, Ucb1};
pub use trend::{TrendError, TrendFunction, TrendKind};
