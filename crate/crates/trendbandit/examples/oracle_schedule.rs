//! Compares the greedy oracle with the exhaustive dynamic-programming oracle
//! on a small instance, then scores a lopsided allocation against them.
//!
//!     cargo run --example oracle_schedule

use trendbandit::{
    exhaustive_oracle, expected_regret, greedy_oracle, TrendFunction, TrendKind,
};

fn main() {
    let means = [0.6, 0.4, 0.3];
    let horizon = 60;

    // A hump-shaped trend: arms get better for their first ~20 pulls, then fade.
    let trend = TrendFunction::new(
        TrendKind::Gaussian {
            center: 20.0,
            width: 400.0,
        },
        horizon,
        0.05,
    )
    .expect("example parameters are valid");

    let greedy = greedy_oracle(&means, &trend, horizon).expect("means are valid");
    let exact = exhaustive_oracle(&means, &trend, horizon).expect("means are valid");

    println!("means: {means:?}, horizon {horizon}, gaussian(20, 400) trend");
    println!("greedy oracle:     counts {:?}, gain {:.4}", greedy.counts, greedy.gain);
    println!("exhaustive oracle: counts {:?}, gain {:.4}", exact.counts, exact.gain);
    println!(
        "greedy is within {:.6} of optimal\n",
        exact.gain - greedy.gain
    );

    // Regret accounting: how much expected gain three allocations leave behind.
    let allocations: [(&str, Vec<u64>); 3] = [
        ("oracle's own counts", greedy.counts.clone()),
        ("even split", vec![20, 20, 20]),
        ("worst arm only", vec![0, 0, 60]),
    ];
    for (label, counts) in allocations {
        let report =
            expected_regret(&counts, &means, &trend, &greedy).expect("counts cover the horizon");
        println!(
            "{label:<20} gain {:>8.4}, regret {:>8.4}",
            report.empirical_gain, report.regret
        );
    }
}
