//! EXP3 for adversarial bandits: exponential weights with γ-greedy mixing.
//!
//! Rewards are scaled by the trend's maximum before the exponential update
//! so the algorithm sees losses in `[0, 1]` as its analysis assumes. Weights
//! are renormalised whenever they grow large; selection probabilities are
//! scale-free, so this changes nothing observable.

use rand::{Rng, RngCore};

use super::{Policy, PolicyError};
use crate::env::Outcome;

/// Weights above this trigger renormalisation (divide all by the max).
const RENORM_THRESHOLD: f64 = 1e150;

#[derive(Debug, Clone)]
pub struct Exp3 {
    weights: Vec<f64>,
    gamma: f64,
    /// Maximum possible modulated reward, used to scale into `[0, 1]`.
    scale: f64,
}

impl Exp3 {
    pub fn new(arms: usize, gamma: f64, scale: f64) -> Result<Self, PolicyError> {
        if !gamma.is_finite() || gamma <= 0.0 || gamma > 1.0 {
            return Err(PolicyError::InvalidParam {
                policy: "exp3".into(),
                param: "gamma".into(),
                value: gamma,
                reason: "must lie in (0, 1]".into(),
            });
        }
        Ok(Self {
            weights: vec![1.0; arms],
            gamma,
            scale,
        })
    }

    /// Current selection distribution: `(1−γ)·w_i/Σw + γ/K`.
    pub fn probabilities(&self) -> Vec<f64> {
        let k = self.weights.len() as f64;
        let total: f64 = self.weights.iter().sum();
        self.weights
            .iter()
            .map(|w| (1.0 - self.gamma) * w / total + self.gamma / k)
            .collect()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Policy for Exp3 {
    fn name(&self) -> &str {
        "exp3"
    }

    fn select(&self, _t: u64, rng: &mut dyn RngCore) -> usize {
        let probs = self.probabilities();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }

    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError> {
        if arm >= self.weights.len() {
            return Err(PolicyError::ArmOutOfRange {
                arm,
                arms: self.weights.len(),
            });
        }
        if !outcome.modulated.is_finite() {
            return Err(PolicyError::NonFiniteReward(outcome.modulated));
        }
        let scaled = if self.scale > 0.0 {
            (outcome.modulated / self.scale).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = self.weights.len() as f64;
        let p = self.probabilities()[arm];
        // Importance-weighted estimate: only the played arm's weight moves.
        self.weights[arm] *= (self.gamma * scaled / (k * p)).exp();

        let max = self.weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max > RENORM_THRESHOLD {
            for w in &mut self.weights {
                *w /= max;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_policy_is_uniform() {
        let policy = Exp3::new(4, 0.1, 1.0).unwrap();
        for p in policy.probabilities() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_out_of_range_is_rejected() {
        assert!(Exp3::new(2, 0.0, 1.0).is_err());
        assert!(Exp3::new(2, 1.5, 1.0).is_err());
        assert!(Exp3::new(2, f64::NAN, 1.0).is_err());
        assert!(Exp3::new(2, 1.0, 1.0).is_ok());
    }

    #[test]
    fn rewarded_arm_gains_probability() {
        let mut policy = Exp3::new(3, 0.1, 2.0).unwrap();
        policy
            .update(1, &Outcome { raw: 1.0, modulated: 2.0 })
            .unwrap();
        let probs = policy.probabilities();
        assert!(probs[1] > probs[0]);
        assert_eq!(probs[0], probs[2]);
    }

    #[test]
    fn zero_scale_degrades_to_uniform_updates() {
        // An all-zero trend pays nothing; the guard must avoid 0/0.
        let mut policy = Exp3::new(2, 0.1, 0.0).unwrap();
        policy
            .update(0, &Outcome { raw: 1.0, modulated: 0.0 })
            .unwrap();
        let probs = policy.probabilities();
        assert_eq!(probs[0], probs[1]);
    }

    #[test]
    fn weights_stay_finite_under_sustained_max_rewards() {
        let mut policy = Exp3::new(2, 0.1, 1.0).unwrap();
        for _ in 0..5000 {
            policy
                .update(0, &Outcome { raw: 1.0, modulated: 1.0 })
                .unwrap();
        }
        let probs = policy.probabilities();
        assert!(policy.weights.iter().all(|w| w.is_finite() && *w > 0.0));
        assert!(probs.iter().all(|p| p.is_finite()));
        assert!(probs[0] > probs[1]);
    }

    #[test]
    fn selection_is_deterministic_given_seed() {
        let policy = Exp3::new(5, 0.1, 1.0).unwrap();
        let draws = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100).map(|t| policy.select(t, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draws(3), draws(3));
        assert_ne!(draws(3), draws(4));
    }

    proptest! {
        #[test]
        fn probabilities_remain_a_mixed_distribution(
            gamma in 0.01..1.0f64,
            arms in 2usize..6,
            rewards in proptest::collection::vec((0usize..6, 0.0..1.0f64), 0..60),
        ) {
            let mut policy = Exp3::new(arms, gamma, 1.0).unwrap();
            for (arm, r) in rewards {
                let arm = arm % arms;
                policy.update(arm, &Outcome { raw: r.round(), modulated: r }).unwrap();
                let probs = policy.probabilities();
                let total: f64 = probs.iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
                let lo = gamma / arms as f64;
                for p in probs {
                    prop_assert!(p >= lo - 1e-12 && p <= 1.0 - lo * (arms as f64 - 1.0) + 1e-12);
                }
            }
        }
    }
}
