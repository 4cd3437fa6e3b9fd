//! Dynamic-oracle regret accounting.
//!
//! The oracle knows the true means and the trend. At every step it plays the
//! arm with the highest *next-pull* expected payoff `μ_i · D(n_i + 1)` — a
//! greedy rule that is optimal whenever the trend never increases, and a
//! strong benchmark otherwise (an exhaustive dynamic program is provided as
//! a cross-check for small instances). Regret is measured in expectation:
//! the oracle's expected gain minus `Σ_i μ_i · F(n_i)` for the counts a
//! policy actually accumulated, which removes Bernoulli noise from the
//! comparison entirely.

use thiserror::Error;

use crate::trend::TrendFunction;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("at least one arm mean is required")]
    EmptyMeans,

    #[error("arm mean must lie in [0, 1], got {0}")]
    InvalidMean(f64),

    #[error("expected {means} pull counts (one per arm), got {counts}")]
    LengthMismatch { means: usize, counts: usize },

    #[error("pull counts total {total} but the oracle schedule covers {horizon} steps")]
    CountSumMismatch { horizon: u64, total: u64 },
}

fn validate_means(means: &[f64]) -> Result<(), OracleError> {
    if means.is_empty() {
        return Err(OracleError::EmptyMeans);
    }
    for &m in means {
        if !m.is_finite() || !(0.0..=1.0).contains(&m) {
            return Err(OracleError::InvalidMean(m));
        }
    }
    Ok(())
}

/// Expected cumulative modulated gain `Σ_i μ_i · F(n_i)` of a pull-count
/// allocation.
pub fn expected_gain(counts: &[u64], means: &[f64], trend: &TrendFunction) -> f64 {
    means
        .iter()
        .zip(counts)
        .map(|(&mu, &n)| mu * trend.cumulative(n))
        .sum()
}

/// The oracle's final allocation and expected gain over a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSchedule {
    pub counts: Vec<u64>,
    pub gain: f64,
    pub horizon: u64,
}

/// Step-by-step oracle play: the arm chosen at each step and the expected
/// gain accumulated after each step (`gains[t]` for `t` in `0..=horizon`).
#[derive(Debug, Clone)]
pub struct OracleTrajectory {
    pub actions: Vec<usize>,
    pub gains: Vec<f64>,
    pub schedule: OracleSchedule,
}

/// Runs the greedy oracle and records its whole trajectory.
pub fn greedy_trajectory(
    means: &[f64],
    trend: &TrendFunction,
    horizon: u64,
) -> Result<OracleTrajectory, OracleError> {
    validate_means(means)?;
    let k = means.len();
    let mut counts = vec![0u64; k];
    let mut actions = Vec::with_capacity(horizon as usize);
    let mut gains = Vec::with_capacity(horizon as usize + 1);
    gains.push(0.0);
    for _ in 0..horizon {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, &mu) in means.iter().enumerate() {
            let score = mu * trend.eval(counts[i] + 1);
            if score > best_score {
                best = i;
                best_score = score;
            }
        }
        counts[best] += 1;
        actions.push(best);
        gains.push(expected_gain(&counts, means, trend));
    }
    let gain = expected_gain(&counts, means, trend);
    Ok(OracleTrajectory {
        actions,
        gains,
        schedule: OracleSchedule {
            counts,
            gain,
            horizon,
        },
    })
}

/// The greedy oracle's final schedule (see [`greedy_trajectory`]).
pub fn greedy_oracle(
    means: &[f64],
    trend: &TrendFunction,
    horizon: u64,
) -> Result<OracleSchedule, OracleError> {
    // Skip the per-step gain bookkeeping when only the endpoint is needed.
    validate_means(means)?;
    let k = means.len();
    let mut counts = vec![0u64; k];
    for _ in 0..horizon {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, &mu) in means.iter().enumerate() {
            let score = mu * trend.eval(counts[i] + 1);
            if score > best_score {
                best = i;
                best_score = score;
            }
        }
        counts[best] += 1;
    }
    let gain = expected_gain(&counts, means, trend);
    Ok(OracleSchedule {
        counts,
        gain,
        horizon,
    })
}

/// Exact optimal allocation by dynamic programming over
/// `max Σ_i μ_i · F(n_i)` subject to `Σ_i n_i = horizon`.
///
/// O(K·T²) — intended as a small-instance cross-check of the greedy oracle,
/// not for production horizons. Ties prefer giving pulls to lower-indexed
/// arms.
pub fn exhaustive_oracle(
    means: &[f64],
    trend: &TrendFunction,
    horizon: u64,
) -> Result<OracleSchedule, OracleError> {
    validate_means(means)?;
    let k = means.len();
    let t = horizon as usize;
    // best[j][n]: max gain allocating n pulls among the first j arms.
    let mut best = vec![f64::NEG_INFINITY; t + 1];
    best[0] = 0.0;
    let mut choice = vec![vec![0usize; t + 1]; k];
    for (j, &mu) in means.iter().enumerate() {
        let mut next = vec![f64::NEG_INFINITY; t + 1];
        for n in 0..=t {
            for here in 0..=n {
                let prev = best[n - here];
                if prev == f64::NEG_INFINITY {
                    continue;
                }
                let gain = prev + mu * trend.cumulative(here as u64);
                // Strict improvement keeps the smallest viable count for
                // this (later-scanned) arm on ties.
                if gain > next[n] {
                    next[n] = gain;
                    choice[j][n] = here;
                }
            }
        }
        best = next;
    }
    let mut counts = vec![0u64; k];
    let mut remaining = t;
    for j in (0..k).rev() {
        let here = choice[j][remaining];
        counts[j] = here as u64;
        remaining -= here;
    }
    let gain = expected_gain(&counts, means, trend);
    Ok(OracleSchedule {
        counts,
        gain,
        horizon,
    })
}

/// Expected-regret comparison of a run's final pull counts against an
/// oracle schedule over the same horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub empirical_gain: f64,
    pub oracle_gain: f64,
    pub regret: f64,
}

pub fn expected_regret(
    run_counts: &[u64],
    means: &[f64],
    trend: &TrendFunction,
    oracle: &OracleSchedule,
) -> Result<RegretReport, OracleError> {
    validate_means(means)?;
    if run_counts.len() != means.len() {
        return Err(OracleError::LengthMismatch {
            means: means.len(),
            counts: run_counts.len(),
        });
    }
    let total: u64 = run_counts.iter().sum();
    if total != oracle.horizon {
        return Err(OracleError::CountSumMismatch {
            horizon: oracle.horizon,
            total,
        });
    }
    let empirical_gain = expected_gain(run_counts, means, trend);
    Ok(RegretReport {
        empirical_gain,
        oracle_gain: oracle.gain,
        regret: oracle.gain - empirical_gain,
    })
}

/// The logarithmic regret bound for the trend-aware policy.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Effective gap `(D_min/D_max)·μ* − μ_i` per arm.
    pub gaps: Vec<f64>,
    /// Arms pulled more often than the oracle pulled them.
    pub contributing_arms: Vec<usize>,
    /// `None` when some contributing arm has a non-positive effective gap,
    /// in which case the bound does not apply.
    pub bound: Option<f64>,
}

/// Evaluates the regret bound
/// `max_i μ_i · D_max · Σ_{i∈C} 8·ln T / Δ'_i² + |C|·π²/3`
/// where `C` is the set of arms the run over-pulled relative to the oracle
/// and `Δ'_i = (D_min/D_max)·μ* − μ_i` is the trend-effective gap.
///
/// Meaningful for horizons of at least 2 (`ln T > 0`).
pub fn regret_bound(
    means: &[f64],
    trend: &TrendFunction,
    oracle: &OracleSchedule,
    run_counts: &[u64],
) -> Result<BoundReport, OracleError> {
    validate_means(means)?;
    if run_counts.len() != means.len() {
        return Err(OracleError::LengthMismatch {
            means: means.len(),
            counts: run_counts.len(),
        });
    }
    let mu_star = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ratio = if trend.d_max() > 0.0 {
        trend.d_min() / trend.d_max()
    } else {
        0.0
    };
    let gaps: Vec<f64> = means.iter().map(|&mu| ratio * mu_star - mu).collect();
    let contributing_arms: Vec<usize> = (0..means.len())
        .filter(|&i| run_counts[i] > oracle.counts[i])
        .collect();

    if contributing_arms.iter().any(|&i| gaps[i] <= 0.0) {
        return Ok(BoundReport {
            gaps,
            contributing_arms,
            bound: None,
        });
    }

    let ln_t = (oracle.horizon as f64).ln();
    let lead = means
        .iter()
        .map(|&mu| mu * trend.d_max())
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = contributing_arms
        .iter()
        .map(|&i| 8.0 * ln_t / (gaps[i] * gaps[i]))
        .sum();
    let tail = contributing_arms.len() as f64 * std::f64::consts::PI.powi(2) / 3.0;
    Ok(BoundReport {
        gaps,
        contributing_arms,
        bound: Some(lead * sum + tail),
    })
}
