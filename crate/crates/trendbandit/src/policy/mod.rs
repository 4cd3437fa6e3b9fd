//! Arm-selection policies.
//!
//! All policies implement [`Policy`]: `select` proposes an arm for step `t`
//! (1-based) and `update` feeds back the outcome of the pull. Index policies
//! (everything except EXP3) start by playing each arm once, in ascending
//! index order — an unvisited arm has an infinite index and ties always break
//! to the lowest arm. Only EXP3 draws randomness during selection.
//!
//! Policies differ in which reward signal they consume: the trend-aware
//! policy estimates the *raw* Bernoulli means (the trend is known, so mixing
//! it into the estimates would only add noise), while the trend-blind
//! baselines see the *modulated* reward, which is what they would observe in
//! the wild.

mod aucb;
mod ducb;
mod exp3;
mod swucb;
mod ucb1;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::RngCore;
use thiserror::Error;

use crate::env::Outcome;
use crate::trend::TrendFunction;

pub use aucb::AUcb;
pub use ducb::DUcb;
pub use exp3::Exp3;
pub use swucb::SwUcb;
pub use ucb1::Ucb1;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("unknown policy \"{0}\"")]
    UnknownPolicy(String),

    #[error("policy \"{policy}\" does not take a parameter \"{param}\"")]
    UnknownParam { policy: String, param: String },

    #[error("policy \"{policy}\" parameter \"{param}\" = {value} is invalid: {reason}")]
    InvalidParam {
        policy: String,
        param: String,
        value: f64,
        reason: String,
    },

    #[error("reward fed to policy is not finite ({0})")]
    NonFiniteReward(f64),

    #[error("updated arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
}

pub trait Policy {
    /// Canonical name, as used in configs and output files.
    fn name(&self) -> &str;

    /// Chooses the arm to play at step `t >= 1`. Selection never mutates the
    /// policy; only EXP3 consumes randomness here.
    fn select(&self, t: u64, rng: &mut dyn RngCore) -> usize;

    /// Records the outcome of pulling `arm`.
    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError>;
}

/// Index of the maximum value, ties resolved to the lowest index.
pub(crate) fn argmax(scores: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, s) in scores.into_iter().enumerate() {
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}

/// Per-arm pull counts and incremental reward means, shared by the UCB-style
/// policies so that the trend-aware index reduces to UCB1 bit-for-bit when
/// the trend is constant.
#[derive(Debug, Clone)]
pub(crate) struct ArmStats {
    counts: Vec<u64>,
    means: Vec<f64>,
}

impl ArmStats {
    pub(crate) fn new(arms: usize) -> Self {
        Self {
            counts: vec![0; arms],
            means: vec![0.0; arms],
        }
    }

    pub(crate) fn arms(&self) -> usize {
        self.counts.len()
    }

    /// Lowest-index arm that has never been played, if any.
    pub(crate) fn unvisited(&self) -> Option<usize> {
        self.counts.iter().position(|&c| c == 0)
    }

    pub(crate) fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub(crate) fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    /// The UCB1 index `μ̂ + sqrt(2·ln t / n)`; requires `n >= 1`.
    pub(crate) fn ucb_index(&self, arm: usize, t: u64) -> f64 {
        Self::index_value(self.means[arm], self.counts[arm], (t as f64).ln())
    }

    pub(crate) fn index_value(mean: f64, n: u64, ln_t: f64) -> f64 {
        mean + (2.0 * ln_t / n as f64).sqrt()
    }

    pub(crate) fn record(&mut self, arm: usize, reward: f64) -> Result<(), PolicyError> {
        if arm >= self.counts.len() {
            return Err(PolicyError::ArmOutOfRange {
                arm,
                arms: self.counts.len(),
            });
        }
        if !reward.is_finite() {
            return Err(PolicyError::NonFiniteReward(reward));
        }
        self.counts[arm] += 1;
        self.means[arm] += (reward - self.means[arm]) / self.counts[arm] as f64;
        Ok(())
    }
}

/// Builds a policy by its canonical name for a `k`-armed problem over
/// `horizon` steps.
///
/// Recognised names and tunable parameters (all optional):
///
/// * `"aucb"` — trend-aware UCB; no parameters.
/// * `"ucb1"` — classic UCB1; no parameters.
/// * `"exp3"` — `gamma` in (0, 1], default 0.1.
/// * `"sw-ucb"` — sliding-window UCB; `tau` (window length, default
///   `round(4·sqrt(T·ln T) / k)`), `xi` (exploration factor, default 2).
/// * `"d-ucb"` — discounted UCB; `discount` in (0, 1), default
///   `1 − 1/(4·sqrt(T))`, and `xi` (default 2).
///
/// Unknown names or parameters are rejected with the offending token named.
pub fn build_policy(
    name: &str,
    params: &BTreeMap<String, f64>,
    k: usize,
    trend: &Arc<TrendFunction>,
    horizon: u64,
    index_lookahead: bool,
) -> Result<Box<dyn Policy>, PolicyError> {
    let reject_params = |policy: &str| -> Result<(), PolicyError> {
        if let Some(param) = params.keys().next() {
            return Err(PolicyError::UnknownParam {
                policy: policy.into(),
                param: param.clone(),
            });
        }
        Ok(())
    };
    let get = |policy: &str, allowed: &[&str], param: &str| -> Result<Option<f64>, PolicyError> {
        if let Some(bad) = params.keys().find(|p| !allowed.contains(&p.as_str())) {
            return Err(PolicyError::UnknownParam {
                policy: policy.into(),
                param: bad.clone(),
            });
        }
        Ok(params.get(param).copied())
    };

    match name {
        "aucb" => {
            reject_params("aucb")?;
            Ok(Box::new(AUcb::new(k, Arc::clone(trend), index_lookahead)))
        }
        "ucb1" => {
            reject_params("ucb1")?;
            Ok(Box::new(Ucb1::new(k)))
        }
        "exp3" => {
            let gamma = get("exp3", &["gamma"], "gamma")?.unwrap_or(0.1);
            Ok(Box::new(Exp3::new(k, gamma, trend.d_max())?))
        }
        "sw-ucb" => {
            let allowed = &["tau", "xi"];
            let tau = match get("sw-ucb", allowed, "tau")? {
                Some(v) => {
                    if !v.is_finite() || v < 1.0 || v.fract() != 0.0 {
                        return Err(PolicyError::InvalidParam {
                            policy: "sw-ucb".into(),
                            param: "tau".into(),
                            value: v,
                            reason: "window length must be a positive integer".into(),
                        });
                    }
                    v as u64
                }
                None => SwUcb::default_window(horizon, k),
            };
            let xi = get("sw-ucb", allowed, "xi")?.unwrap_or(2.0);
            Ok(Box::new(SwUcb::new(k, tau, xi)?))
        }
        "d-ucb" => {
            let allowed = &["discount", "xi"];
            let discount =
                get("d-ucb", allowed, "discount")?.unwrap_or_else(|| DUcb::default_discount(horizon));
            let xi = get("d-ucb", allowed, "xi")?.unwrap_or(2.0);
            Ok(Box::new(DUcb::new(k, discount, xi)?))
        }
        other => Err(PolicyError::UnknownPolicy(other.into())),
    }
}

/// Names accepted by [`build_policy`], in the order experiments report them.
pub const POLICY_NAMES: [&str; 5] = ["aucb", "ucb1", "exp3", "sw-ucb", "d-ucb"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trend::TrendKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_trend() -> Arc<TrendFunction> {
        Arc::new(TrendFunction::with_default_floor(TrendKind::Constant { level: 1.0 }, 1000).unwrap())
    }

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax([1.0, 3.0, 3.0, 2.0]), 1);
        assert_eq!(argmax([f64::INFINITY, f64::INFINITY]), 0);
        assert_eq!(argmax([-1.0]), 0);
    }

    #[test]
    fn incremental_mean_matches_two_sample_average() {
        let mut stats = ArmStats::new(1);
        stats.record(0, 0.0).unwrap();
        assert_eq!(stats.mean(0), 0.0);
        stats.record(0, 1.0).unwrap();
        assert_eq!(stats.count(0), 2);
        assert_eq!(stats.mean(0), 0.5);
    }

    #[test]
    fn non_finite_rewards_are_rejected() {
        let mut stats = ArmStats::new(1);
        let err = stats.record(0, f64::NAN).unwrap_err();
        assert!(matches!(err, PolicyError::NonFiniteReward(_)));
        let err = stats.record(0, f64::INFINITY).unwrap_err();
        assert!(matches!(err, PolicyError::NonFiniteReward(_)));
    }

    #[test]
    fn factory_knows_all_policy_names() {
        let trend = unit_trend();
        for name in POLICY_NAMES {
            let p = build_policy(name, &BTreeMap::new(), 3, &trend, 1000, true).unwrap();
            assert_eq!(p.name(), name);
        }
    }

    #[test]
    fn factory_rejects_unknown_policy() {
        let err = build_policy("ucb2", &BTreeMap::new(), 3, &unit_trend(), 1000, true)
            .err()
            .unwrap();
        assert!(err.to_string().contains("ucb2"));
    }

    #[test]
    fn factory_rejects_unknown_param() {
        let mut params = BTreeMap::new();
        params.insert("epsilon".to_string(), 0.1);
        let err = build_policy("exp3", &params, 3, &unit_trend(), 1000, true)
            .err()
            .unwrap();
        assert!(err.to_string().contains("epsilon"));
    }

    #[test]
    fn index_policies_sweep_arms_in_order() {
        let trend = unit_trend();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for name in ["aucb", "ucb1", "sw-ucb", "d-ucb"] {
            let mut policy = build_policy(name, &BTreeMap::new(), 3, &trend, 1000, true).unwrap();
            for t in 1..=3u64 {
                let arm = policy.select(t, &mut rng);
                assert_eq!(arm as u64, t - 1, "{name} broke the initial sweep");
                policy
                    .update(arm, &Outcome { raw: 1.0, modulated: 1.0 })
                    .unwrap();
            }
        }
    }
}
