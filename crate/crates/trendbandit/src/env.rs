//! Bandit environment: Bernoulli arms whose payoffs are modulated by a known
//! trend in the arm's own pull count.
//!
//! Pulling arm `i` for the `s`-th time yields the raw Bernoulli draw
//! `r ∈ {0, 1}` with mean `μ_i`, and the modulated reward `r · D_i(s)`.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::trend::TrendFunction;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("arm mean must lie in [0, 1], got {0}")]
    InvalidMean(f64),

    #[error("environment needs at least one arm")]
    NoArms,

    #[error("arm index {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
}

/// A single Bernoulli arm, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSpec {
    mean: f64,
}

impl ArmSpec {
    pub fn new(mean: f64) -> Result<Self, EnvError> {
        if !(0.0..=1.0).contains(&mean) || !mean.is_finite() {
            return Err(EnvError::InvalidMean(mean));
        }
        Ok(Self { mean })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// What one pull produced: the raw Bernoulli outcome (0.0 or 1.0) and the
/// trend-modulated reward actually collected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub raw: f64,
    pub modulated: f64,
}

/// The simulated environment; owns per-arm pull counts and a step counter.
#[derive(Debug, Clone)]
pub struct BanditEnvironment {
    arms: Vec<ArmSpec>,
    trends: Vec<Arc<TrendFunction>>,
    pull_counts: Vec<u64>,
    step: u64,
}

impl BanditEnvironment {
    /// All arms share `trend`; use [`BanditEnvironment::set_arm_trend`] to
    /// override individual arms afterwards.
    pub fn new(arms: Vec<ArmSpec>, trend: Arc<TrendFunction>) -> Result<Self, EnvError> {
        if arms.is_empty() {
            return Err(EnvError::NoArms);
        }
        let k = arms.len();
        Ok(Self {
            arms,
            trends: vec![trend; k],
            pull_counts: vec![0; k],
            step: 0,
        })
    }

    pub fn from_means(means: &[f64], trend: Arc<TrendFunction>) -> Result<Self, EnvError> {
        let arms = means
            .iter()
            .map(|&m| ArmSpec::new(m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arms, trend)
    }

    pub fn set_arm_trend(&mut self, arm: usize, trend: Arc<TrendFunction>) -> Result<(), EnvError> {
        self.check_arm(arm)?;
        self.trends[arm] = trend;
        Ok(())
    }

    fn check_arm(&self, arm: usize) -> Result<(), EnvError> {
        if arm >= self.arms.len() {
            return Err(EnvError::ArmOutOfRange {
                arm,
                arms: self.arms.len(),
            });
        }
        Ok(())
    }

    /// Draws the arm's Bernoulli reward and applies the trend at the new pull
    /// count, advancing the environment by one step.
    pub fn pull<R: Rng + ?Sized>(&mut self, arm: usize, rng: &mut R) -> Result<Outcome, EnvError> {
        self.check_arm(arm)?;
        self.pull_counts[arm] += 1;
        self.step += 1;
        let raw = if rng.gen_bool(self.arms[arm].mean) {
            1.0
        } else {
            0.0
        };
        let modulated = raw * self.trends[arm].eval(self.pull_counts[arm]);
        Ok(Outcome { raw, modulated })
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.mean).collect()
    }

    pub fn pull_counts(&self) -> &[u64] {
        &self.pull_counts
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn trend(&self, arm: usize) -> &Arc<TrendFunction> {
        &self.trends[arm]
    }
}
