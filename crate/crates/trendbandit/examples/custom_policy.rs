//! Implements the `Policy` trait for a hand-rolled epsilon-greedy strategy
//! and races it against A-UCB on the decreasing-trend scenario, using the
//! same manual loop the harness runs internally.
//!
//!     cargo run --release --example custom_policy

use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trendbandit::{
    build_policy, expected_regret, greedy_oracle, BanditEnvironment, Outcome, Policy, PolicyError,
    TrendFunction, TrendKind,
};

/// Epsilon-greedy on the raw (trend-free) means: explores uniformly with
/// probability `epsilon`, otherwise exploits the best raw estimate. It is
/// deliberately trend-blind, which is exactly what sinks it here.
struct EpsilonGreedy {
    epsilon: f64,
    counts: Vec<u64>,
    means: Vec<f64>,
}

impl EpsilonGreedy {
    fn new(k: usize, epsilon: f64) -> Self {
        Self {
            epsilon,
            counts: vec![0; k],
            means: vec![0.0; k],
        }
    }
}

impl Policy for EpsilonGreedy {
    fn name(&self) -> &str {
        "eps-greedy"
    }

    fn select(&self, _t: u64, rng: &mut dyn RngCore) -> usize {
        if let Some(arm) = self.counts.iter().position(|&n| n == 0) {
            return arm; // visit every arm once first
        }
        if rng.gen::<f64>() < self.epsilon {
            return rng.gen_range(0..self.counts.len());
        }
        self.means
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(arm, _)| arm)
            .unwrap_or(0)
    }

    fn update(&mut self, arm: usize, outcome: &Outcome) -> Result<(), PolicyError> {
        if !outcome.raw.is_finite() {
            return Err(PolicyError::NonFiniteReward(outcome.raw));
        }
        self.counts[arm] += 1;
        let n = self.counts[arm] as f64;
        self.means[arm] += (outcome.raw - self.means[arm]) / n;
        Ok(())
    }
}

fn main() {
    let means = [0.6, 0.4, 0.3, 0.3, 0.15, 0.1, 0.05, 0.05];
    let horizon: u64 = 32_000;
    let trend = Arc::new(
        TrendFunction::new(TrendKind::LogDecreasing { a: -6.65, b: 9.57 }, horizon, 0.35)
            .expect("trend parameters are valid"),
    );
    let oracle = greedy_oracle(&means, &trend, horizon).expect("means are valid");
    println!("oracle gain: {:.2}\n", oracle.gain);

    let contenders: Vec<Box<dyn Policy>> = vec![
        Box::new(EpsilonGreedy::new(means.len(), 0.1)),
        build_policy(
            "aucb",
            &Default::default(),
            means.len(),
            &trend,
            horizon,
            true,
        )
        .expect("known policy"),
    ];

    for mut policy in contenders {
        let mut env = BanditEnvironment::from_means(&means, Arc::clone(&trend))
            .expect("valid means");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut reward = 0.0;
        for t in 1..=horizon {
            let arm = policy.select(t, &mut rng);
            let outcome = env.pull(arm, &mut rng).expect("arm in range");
            reward += outcome.modulated;
            policy.update(arm, &outcome).expect("finite reward");
        }
        let report = expected_regret(env.pull_counts(), &means, &trend, &oracle)
            .expect("counts cover the horizon");
        println!(
            "{:<11} accumulated reward {:>9.2}, expected regret {:>8.2}",
            policy.name(),
            reward,
            report.regret
        );
    }
}
