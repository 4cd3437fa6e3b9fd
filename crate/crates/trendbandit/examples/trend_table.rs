//! Builds one trend of every kind and tabulates D(n) next to its running sum
//! F(n), then shows the cached extrema the policies and the bound rely on.
//!
//!     cargo run --example trend_table

use trendbandit::{TrendFunction, TrendKind};

fn main() {
    let cap = 32_000;
    let trends = [
        (
            "constant(1)",
            TrendFunction::with_default_floor(TrendKind::Constant { level: 1.0 }, cap),
        ),
        (
            "log-decreasing(-6.65, 9.57), floor 0.35",
            TrendFunction::new(TrendKind::LogDecreasing { a: -6.65, b: 9.57 }, cap, 0.35),
        ),
        (
            "logistic(1, 0.05, 150), floor 0.3",
            TrendFunction::new(
                TrendKind::Logistic {
                    max: 1.0,
                    steepness: 0.05,
                    midpoint: 150.0,
                },
                cap,
                0.3,
            ),
        ),
        (
            "gaussian(20, 40), floor 0.05",
            TrendFunction::new(
                TrendKind::Gaussian {
                    center: 20.0,
                    width: 40.0,
                },
                cap,
                0.05,
            ),
        ),
        (
            "tabulated [3, 2, 1] (last value extends)",
            TrendFunction::with_default_floor(
                TrendKind::Tabulated {
                    values: vec![3.0, 2.0, 1.0],
                },
                cap,
            ),
        ),
    ];

    let probes = [1u64, 2, 5, 20, 150, 1_000, 32_000];
    for (label, trend) in trends {
        let trend = trend.expect("example parameters are valid");
        println!("{label}");
        println!("  {:>8} {:>12} {:>14}", "n", "D(n)", "F(n)");
        for &n in &probes {
            println!("  {:>8} {:>12.6} {:>14.4}", n, trend.eval(n), trend.cumulative(n));
        }
        println!(
            "  extrema over the capped range: D_min = {:.6}, D_max = {:.6}\n",
            trend.d_min(),
            trend.d_max()
        );
    }
}
