//! Drives A-UCB and UCB1 in lockstep on a flat trend with shared seeds and
//! shows they choose the same arm at every step — the trend-aware index
//! collapses to plain UCB1 when D is constant.
//!
//!     cargo run --example constant_reduction

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trendbandit::{build_policy, BanditEnvironment, TrendFunction, TrendKind};

fn main() {
    let means = [0.6, 0.4, 0.3, 0.3, 0.15, 0.1, 0.05, 0.05];
    let horizon: u64 = 10_000;
    let trend = Arc::new(
        TrendFunction::with_default_floor(TrendKind::Constant { level: 1.0 }, horizon)
            .expect("constant trend is valid"),
    );

    let no_params = BTreeMap::new();
    let mut aucb =
        build_policy("aucb", &no_params, means.len(), &trend, horizon, true).expect("known policy");
    let mut ucb1 =
        build_policy("ucb1", &no_params, means.len(), &trend, horizon, true).expect("known policy");
    let mut env_a = BanditEnvironment::from_means(&means, Arc::clone(&trend)).expect("valid means");
    let mut env_u = BanditEnvironment::from_means(&means, Arc::clone(&trend)).expect("valid means");
    let mut rng_a = ChaCha8Rng::seed_from_u64(2026);
    let mut rng_u = ChaCha8Rng::seed_from_u64(2026);

    let mut agreements: u64 = 0;
    for t in 1..=horizon {
        let a = aucb.select(t, &mut rng_a);
        let u = ucb1.select(t, &mut rng_u);
        if a == u {
            agreements += 1;
        }
        if t <= 12 {
            println!("t = {t:>2}: aucb -> arm {a}, ucb1 -> arm {u}");
        }
        let out_a = env_a.pull(a, &mut rng_a).expect("arm in range");
        let out_u = env_u.pull(u, &mut rng_u).expect("arm in range");
        aucb.update(a, &out_a).expect("finite reward");
        ucb1.update(u, &out_u).expect("finite reward");
    }

    println!("...");
    println!("agreement: {agreements}/{horizon} steps");
    println!("final pull counts (aucb): {:?}", env_a.pull_counts());
    println!("final pull counts (ucb1): {:?}", env_u.pull_counts());
    assert_eq!(agreements, horizon);
}
