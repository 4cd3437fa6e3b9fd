//! Trend-aware UCB: the UCB1 confidence index on the *raw* Bernoulli means,
//! multiplied by the known trend value the arm would pay on its next pull.
//!
//! Because the trend is a function of the arm's own pull count, the policy
//! can anticipate it exactly; the only thing left to learn is the stationary
//! Bernoulli mean, so the estimator is fed raw outcomes rather than
//! modulated rewards.

use std::sync::Arc;

use rand::RngCore;

use super::{argmax, ArmStats, Policy, PolicyError};
use crate::env::Outcome;
use crate::trend::TrendFunction;

#[derive(Debug, Clone)]
pub struct AUcb {
    stats: ArmStats,
    trend: Arc<TrendFunction>,
    /// When set (the default), the index weights by `D(n+1)` — the value of
    /// the pull being decided — instead of `D(n)`.
    lookahead: bool,
}

impl AUcb {
    pub fn new(arms: usize, trend: Arc<TrendFunction>, lookahead: bool) -> Self {
        Self {
            stats: ArmStats::new(arms),
            trend,
            lookahead,
        }
    }

    /// The selection index `(μ̂ + sqrt(2·ln t / n)) · D(·)` for a visited arm.
    pub fn index(&self, arm: usize, t: u64) -> f64 {
        let n = self.stats.count(arm);
        debug_assert!(n >= 1, "index is undefined before an arm's first pull");
        let at = if self.lookahead { n + 1 } else { n };
        self.stats.ucb_index(arm, t) * self.trend.eval(at)
    }

    pub fn mean_estimate(&self, arm: usize) -> f64 {
        self.stats.mean(arm)
    }
}

impl Policy for AUcb {
    fn name(&self) -> &str {
        "aucb"
    }

    fn select(&self, t: u64, _rng: &mut dyn RngCore) -> usize {
        if let Some(arm) = self.stats.unvisited() {
            return arm;
        }
        argmax((0..self.stats.arms()).map(|arm| self.index(arm, t)))
    }

    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError> {
        self.stats.record(arm, outcome.raw)
    }
}
