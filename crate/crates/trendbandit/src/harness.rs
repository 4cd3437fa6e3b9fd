//! Experiment harness: seeded single runs, the parallel multi-run driver and
//! cross-run aggregation.
//!
//! Reproducibility contract: every run draws from its own ChaCha8 stream,
//! seeded with the first 8 bytes (little-endian) of
//! `SHA-256(master_seed as u64 LE ‖ policy name UTF-8 ‖ run index as u32 LE)`.
//! The stream is shared by selection and environment in strict
//! select-then-pull order, and only EXP3 consumes randomness during
//! selection, so results are bit-identical for a given config regardless of
//! thread count or platform.

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use crate::config::{ConfigError, ExperimentConfig, PolicySpec};
use crate::env::{BanditEnvironment, EnvError};
use crate::oracle::{self, greedy_trajectory, OracleError, OracleSchedule, OracleTrajectory};
use crate::policy::PolicyError;
use crate::trend::TrendFunction;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Oracle(#[from] OracleError),

    #[error("policy \"{policy}\" run {run_index}: {source}")]
    Run {
        policy: String,
        run_index: u32,
        source: StepError,
    },
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error(transparent)]
    Env(#[from] EnvError),

    #[error(transparent)]
    Policy(#[from] PolicyError),
}

/// Derives the per-run RNG seed; see the module docs for the exact rule.
pub fn run_seed(master_seed: u64, policy_name: &str, run_index: u32) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(policy_name.as_bytes());
    hasher.update(run_index.to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Metrics captured at one checkpoint of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointRow {
    pub t: u64,
    /// Total modulated reward collected so far.
    pub modulated_reward: f64,
    /// Total raw Bernoulli reward collected so far.
    pub raw_reward: f64,
    /// Oracle's expected gain at `t` minus `Σ_i μ_i·F(n_i(t))`.
    pub expected_regret: f64,
    /// Fraction of the first `t` selections matching the oracle's action
    /// sequence.
    pub oracle_agreement_rate: f64,
    /// Per-arm pull counts at this checkpoint.
    pub counts: Vec<u64>,
}

/// One policy × one seed, with metrics at every checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub policy: String,
    pub run_index: u32,
    pub seed: u64,
    pub checkpoints: Vec<CheckpointRow>,
    pub final_counts: Vec<u64>,
}

/// Mean and sample standard deviation of each metric across runs, one entry
/// per checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCheckpoint {
    pub t: u64,
    pub mean_modulated: f64,
    pub std_modulated: f64,
    pub mean_raw: f64,
    pub std_raw: f64,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub mean_agreement: f64,
    pub std_agreement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRecord {
    pub policy: String,
    pub checkpoints: Vec<AggregateCheckpoint>,
}

/// Everything runs share: the trend, the oracle trajectory and the
/// tolerance below which negative regret is only worth a warning.
#[derive(Debug)]
pub struct RunContext {
    pub trend: Arc<TrendFunction>,
    pub oracle: OracleTrajectory,
    /// 0 for non-increasing trends, where the greedy oracle is provably
    /// optimal and any negative regret is a bug; a small relative slack
    /// otherwise, since a policy may legitimately edge out the myopic
    /// oracle on rising trends.
    pub dominance_eps: f64,
}

impl RunContext {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, RunError> {
        let trend = Arc::new(cfg.build_trend()?);
        let oracle = greedy_trajectory(&cfg.means, &trend, cfg.horizon)?;
        let dominance_eps = if trend.is_non_increasing() {
            0.0
        } else {
            1e-6 * oracle.schedule.gain
        };
        Ok(Self {
            trend,
            oracle,
            dominance_eps,
        })
    }
}

/// Executes one seeded run of `spec` under `cfg`, reusing a prepared
/// context.
pub fn run_single_with(
    cfg: &ExperimentConfig,
    spec: &PolicySpec,
    run_index: u32,
    ctx: &RunContext,
) -> Result<RunRecord, RunError> {
    let fail = |source: StepError| RunError::Run {
        policy: spec.name.clone(),
        run_index,
        source,
    };
    let mut policy = cfg.build_policy(spec, &ctx.trend)?;
    let mut env = BanditEnvironment::from_means(&cfg.means, Arc::clone(&ctx.trend))
        .map_err(|e| fail(e.into()))?;
    let seed = run_seed(cfg.master_seed, &spec.name, run_index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut modulated = 0.0;
    let mut raw = 0.0;
    let mut agreements = 0u64;
    let mut checkpoints = Vec::new();
    let mut warned = false;
    for t in 1..=cfg.horizon {
        let arm = policy.select(t, &mut rng);
        let outcome = env.pull(arm, &mut rng).map_err(|e| fail(e.into()))?;
        policy.update(arm, &outcome).map_err(|e| fail(e.into()))?;
        modulated += outcome.modulated;
        raw += outcome.raw;
        if arm == ctx.oracle.actions[(t - 1) as usize] {
            agreements += 1;
        }
        if t % cfg.checkpoint_interval == 0 || t == cfg.horizon {
            let gain = oracle::expected_gain(env.pull_counts(), &cfg.means, &ctx.trend);
            let regret = ctx.oracle.gains[t as usize] - gain;
            if regret < -ctx.dominance_eps && !warned {
                eprintln!(
                    "warning: policy \"{}\" run {run_index} beat the greedy oracle by {} at t = {t}",
                    spec.name, -regret
                );
                warned = true;
            }
            checkpoints.push(CheckpointRow {
                t,
                modulated_reward: modulated,
                raw_reward: raw,
                expected_regret: regret,
                oracle_agreement_rate: agreements as f64 / t as f64,
                counts: env.pull_counts().to_vec(),
            });
        }
    }

    Ok(RunRecord {
        policy: spec.name.clone(),
        run_index,
        seed,
        checkpoints,
        final_counts: env.pull_counts().to_vec(),
    })
}

/// Convenience wrapper that prepares a fresh context for a single run.
pub fn run_single(
    cfg: &ExperimentConfig,
    spec: &PolicySpec,
    run_index: u32,
) -> Result<RunRecord, RunError> {
    let ctx = RunContext::new(cfg)?;
    run_single_with(cfg, spec, run_index, &ctx)
}

/// All runs of all policies plus cross-run aggregates, in config order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub runs: Vec<RunRecord>,
    pub aggregates: Vec<AggregateRecord>,
    pub oracle: OracleSchedule,
}

/// Validates the config and executes every (policy, run) pair, in parallel.
///
/// Output order and content are independent of the worker-thread count:
/// runs are self-seeded, collected in task order and aggregated
/// sequentially.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, RunError> {
    cfg.validate()?;
    let ctx = RunContext::new(cfg)?;
    let tasks: Vec<(usize, u32)> = (0..cfg.policies.len())
        .flat_map(|p| (0..cfg.runs).map(move |r| (p, r)))
        .collect();
    let runs: Vec<RunRecord> = tasks
        .par_iter()
        .map(|&(p, r)| run_single_with(cfg, &cfg.policies[p], r, &ctx))
        .collect::<Result<_, _>>()?;
    let aggregates = runs
        .chunks(cfg.runs as usize)
        .map(|chunk| aggregate(&chunk[0].policy, chunk))
        .collect();
    Ok(ExperimentResult {
        runs,
        aggregates,
        oracle: ctx.oracle.schedule,
    })
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Folds runs of one policy into per-checkpoint means and sample standard
/// deviations, in ascending run order.
pub fn aggregate(policy: &str, runs: &[RunRecord]) -> AggregateRecord {
    assert!(!runs.is_empty(), "cannot aggregate zero runs");
    let grid = runs[0].checkpoints.len();
    let mut checkpoints = Vec::with_capacity(grid);
    for c in 0..grid {
        let column = |f: fn(&CheckpointRow) -> f64| -> Vec<f64> {
            runs.iter().map(|r| f(&r.checkpoints[c])).collect()
        };
        let (mean_modulated, std_modulated) = mean_and_std(&column(|r| r.modulated_reward));
        let (mean_raw, std_raw) = mean_and_std(&column(|r| r.raw_reward));
        let (mean_regret, std_regret) = mean_and_std(&column(|r| r.expected_regret));
        let (mean_agreement, std_agreement) = mean_and_std(&column(|r| r.oracle_agreement_rate));
        checkpoints.push(AggregateCheckpoint {
            t: runs[0].checkpoints[c].t,
            mean_modulated,
            std_modulated,
            mean_raw,
            std_raw,
            mean_regret,
            std_regret,
            mean_agreement,
            std_agreement,
        });
    }
    AggregateRecord {
        policy: policy.to_string(),
        checkpoints,
    }
}
