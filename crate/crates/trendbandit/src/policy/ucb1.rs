//! Classic UCB1, blind to the trend: it estimates means of the modulated
//! rewards it actually receives and plays the plain confidence index.

use rand::RngCore;

use super::{argmax, ArmStats, Policy, PolicyError};
use crate::env::Outcome;

#[derive(Debug, Clone)]
pub struct Ucb1 {
    stats: ArmStats,
}

impl Ucb1 {
    pub fn new(arms: usize) -> Self {
        Self {
            stats: ArmStats::new(arms),
        }
    }

    /// The index `μ̂ + sqrt(2·ln t / n)` for a visited arm.
    pub fn index(&self, arm: usize, t: u64) -> f64 {
        debug_assert!(self.stats.count(arm) >= 1);
        self.stats.ucb_index(arm, t)
    }

    pub fn mean_estimate(&self, arm: usize) -> f64 {
        self.stats.mean(arm)
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &str {
        "ucb1"
    }

    fn select(&self, t: u64, _rng: &mut dyn RngCore) -> usize {
        if let Some(arm) = self.stats.unvisited() {
            return arm;
        }
        argmax((0..self.stats.arms()).map(|arm| self.index(arm, t)))
    }

    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError> {
        self.stats.record(arm, outcome.modulated)
    }
}
