//! Discounted UCB: exponentially down-weights old observations so the
//! estimates track a drifting reward, with a padded exploration bonus.

use rand::RngCore;

use super::{argmax, Policy, PolicyError};
use crate::env::Outcome;

#[derive(Debug, Clone)]
pub struct DUcb {
    discount: f64,
    xi: f64,
    /// Discounted reward sums and pull counts per arm.
    sums: Vec<f64>,
    counts: Vec<f64>,
    /// All-time pull counts, used only for the initial sweep.
    global_counts: Vec<u64>,
}

impl DUcb {
    pub fn new(arms: usize, discount: f64, xi: f64) -> Result<Self, PolicyError> {
        if !discount.is_finite() || discount <= 0.0 || discount >= 1.0 {
            return Err(PolicyError::InvalidParam {
                policy: "d-ucb".into(),
                param: "discount".into(),
                value: discount,
                reason: "must lie strictly between 0 and 1".into(),
            });
        }
        if !xi.is_finite() || xi <= 0.0 {
            return Err(PolicyError::InvalidParam {
                policy: "d-ucb".into(),
                param: "xi".into(),
                value: xi,
                reason: "must be a positive real".into(),
            });
        }
        Ok(Self {
            discount,
            xi,
            sums: vec![0.0; arms],
            counts: vec![0.0; arms],
            global_counts: vec![0; arms],
        })
    }

    /// The horizon-tuned discount `1 − 1/(4·sqrt(T))`.
    pub fn default_discount(horizon: u64) -> f64 {
        let t = horizon.max(1) as f64;
        1.0 - 1.0 / (4.0 * t.sqrt())
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    fn index(&self, arm: usize, n_gamma: f64) -> f64 {
        let n = self.counts[arm];
        if n <= 0.0 {
            return f64::INFINITY;
        }
        let log_term = n_gamma.ln().max(0.0);
        self.sums[arm] / n + 2.0 * (self.xi * log_term / n).sqrt()
    }
}

impl Policy for DUcb {
    fn name(&self) -> &str {
        "d-ucb"
    }

    fn select(&self, _t: u64, _rng: &mut dyn RngCore) -> usize {
        if let Some(arm) = self.global_counts.iter().position(|&c| c == 0) {
            return arm;
        }
        let n_gamma: f64 = self.counts.iter().sum();
        argmax((0..self.counts.len()).map(|arm| self.index(arm, n_gamma)))
    }

    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError> {
        if arm >= self.counts.len() {
            return Err(PolicyError::ArmOutOfRange {
                arm,
                arms: self.counts.len(),
            });
        }
        if !outcome.modulated.is_finite() {
            return Err(PolicyError::NonFiniteReward(outcome.modulated));
        }
        for i in 0..self.counts.len() {
            self.sums[i] *= self.discount;
            self.counts[i] *= self.discount;
        }
        self.sums[arm] += outcome.modulated;
        self.counts[arm] += 1.0;
        self.global_counts[arm] += 1;
        Ok(())
    }
}
