//! Sliding-window UCB for non-stationary rewards: means and counts are
//! computed over the last `τ` pulls only, with an inflated exploration
//! bonus.
//!
//! Window statistics are recomputed from the stored window on every
//! selection rather than maintained incrementally; this keeps them exactly
//! equal to a from-scratch summation (no floating-point drift from
//! add/remove cycles) at a modest O(τ) cost per step.

use std::collections::VecDeque;

use rand::RngCore;

use super::{argmax, Policy, PolicyError};
use crate::env::Outcome;

#[derive(Debug, Clone)]
pub struct SwUcb {
    arms: usize,
    tau: u64,
    xi: f64,
    /// The last `tau` (arm, modulated reward) observations, oldest first.
    window: VecDeque<(usize, f64)>,
    /// All-time pull counts, used only for the initial sweep — the window
    /// alone could forget an arm entirely when `τ < K`.
    global_counts: Vec<u64>,
}

impl SwUcb {
    pub fn new(arms: usize, tau: u64, xi: f64) -> Result<Self, PolicyError> {
        if tau == 0 {
            return Err(PolicyError::InvalidParam {
                policy: "sw-ucb".into(),
                param: "tau".into(),
                value: 0.0,
                reason: "window length must be a positive integer".into(),
            });
        }
        if !xi.is_finite() || xi <= 0.0 {
            return Err(PolicyError::InvalidParam {
                policy: "sw-ucb".into(),
                param: "xi".into(),
                value: xi,
                reason: "must be a positive real".into(),
            });
        }
        Ok(Self {
            arms,
            tau,
            xi,
            window: VecDeque::with_capacity(tau as usize + 1),
            global_counts: vec![0; arms],
        })
    }

    /// The standard horizon-tuned window `round(4·sqrt(T·ln T) / K)`.
    pub fn default_window(horizon: u64, arms: usize) -> u64 {
        if horizon < 2 {
            return 1;
        }
        let t = horizon as f64;
        let tau = 4.0 * (t * t.ln()).sqrt() / arms as f64;
        (tau.round() as u64).max(1)
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    /// Per-arm (count, sum) over the current window, summed oldest-first.
    fn windowed_stats(&self) -> Vec<(u64, f64)> {
        let mut stats = vec![(0u64, 0.0f64); self.arms];
        for &(arm, reward) in &self.window {
            stats[arm].0 += 1;
            stats[arm].1 += reward;
        }
        stats
    }

    fn index(&self, count: u64, sum: f64, t: u64) -> f64 {
        if count == 0 {
            return f64::INFINITY;
        }
        let n = count as f64;
        let horizon_seen = t.min(self.tau) as f64;
        sum / n + (self.xi * horizon_seen.ln() / n).sqrt()
    }
}

impl Policy for SwUcb {
    fn name(&self) -> &str {
        "sw-ucb"
    }

    fn select(&self, t: u64, _rng: &mut dyn RngCore) -> usize {
        if let Some(arm) = self.global_counts.iter().position(|&c| c == 0) {
            return arm;
        }
        let stats = self.windowed_stats();
        argmax(stats.iter().map(|&(count, sum)| self.index(count, sum, t)))
    }

    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError> {
        if arm >= self.arms {
            return Err(PolicyError::ArmOutOfRange {
                arm,
                arms: self.arms,
            });
        }
        if !outcome.modulated.is_finite() {
            return Err(PolicyError::NonFiniteReward(outcome.modulated));
        }
        self.global_counts[arm] += 1;
        self.window.push_back((arm, outcome.modulated));
        if self.window.len() > self.tau as usize {
            self.window.pop_front();
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
    fn default_window_for_reference_experiment() {
        // T = 32000, K = 8: 4·sqrt(T·ln T)/K rounds to 288.
        assert_eq!(SwUcb::default_window(32_000, 8), 288);
        assert_eq!(SwUcb::default_window(0, 4), 1);
        assert_eq!(SwUcb::default_window(1, 4), 1);
    }

    #[test]
    fn old_observations_fall_out_of_the_window() {
        let mut policy = SwUcb::new(2, 2, 2.0).unwrap();
        for &(arm, r) in &[(0usize, 1.0), (1usize, 0.5), (0usize, 0.0)] {
            policy.update(arm, &Outcome { raw: r, modulated: r }).unwrap();
        }
        let stats = policy.windowed_stats();
        assert_eq!(stats[0], (1, 0.0));
        assert_eq!(stats[1], (1, 0.5));
    }

    #[test]
    fn sweep_survives_a_window_shorter_than_the_arm_count() {
        let policy_arms = 3;
        let mut policy = SwUcb::new(policy_arms, 2, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for t in 1..=3u64 {
            let arm = policy.select(t, &mut rng);
            assert_eq!(arm as u64, t - 1);
            policy.update(arm, &Outcome { raw: 1.0, modulated: 1.0 }).unwrap();
        }
    }

    #[test]
    fn index_matches_manual_computation() {
        let mut policy = SwUcb::new(2, 10, 2.0).unwrap();
        for &(arm, r) in &[(0usize, 1.0), (1usize, 0.0), (0usize, 0.5)] {
            policy.update(arm, &Outcome { raw: r, modulated: r }).unwrap();
        }
        let stats = policy.windowed_stats();
        let t = 3u64;
        let expected0 = 1.5 / 2.0 + (2.0 * (3f64).ln() / 2.0).sqrt();
        assert_eq!(policy.index(stats[0].0, stats[0].1, t), expected0);
        let expected1 = 0.0 + (2.0 * (3f64).ln() / 1.0).sqrt();
        assert_eq!(policy.index(stats[1].0, stats[1].1, t), expected1);
    }

    proptest! {
        #[test]
        fn window_stats_equal_brute_force_recomputation(
            tau in 1u64..20,
            pulls in proptest::collection::vec((0usize..4, 0.0..5.0f64), 0..100),
        ) {
            let mut policy = SwUcb::new(4, tau, 2.0).unwrap();
            let mut history: Vec<(usize, f64)> = Vec::new();
            for (arm, r) in pulls {
                policy.update(arm, &Outcome { raw: r.round(), modulated: r }).unwrap();
                history.push((arm, r));

                // Brute force: sum the last τ observations, oldest first.
                let start = history.len().saturating_sub(tau as usize);
                let mut expected = vec![(0u64, 0.0f64); 4];
                for &(a, x) in &history[start..] {
                    expected[a].0 += 1;
                    expected[a].1 += x;
                }
                let got = policy.windowed_stats();
                prop_assert_eq!(got, expected);
            }
        }
    }
}
