//! Injecting positive mood into socially maintained populations and comparing
//! against the same seeds left alone.
//!
//! cargo run --release --example mood_injection -- [runs]

use affectsim::config::{InjectionConfig, SimConfig};
use affectsim::experiments::{compare_injection, run_condition};

fn main() {
    let runs: u64 = std::env::args().nth(1).map_or(100, |s| s.parse().expect("runs"));
    let injection = InjectionConfig::default();
    let base = SimConfig::default();
    let injected = SimConfig {
        injection: Some(injection),
        ..base.clone()
    };

    let a = run_condition(&base, "baseline", runs).expect("runs");
    let b = run_condition(&injected, "injected", runs).expect("runs");
    let cmp = compare_injection(&a, &b, &injection);

    println!("{} seed pairs (baseline survived, injected alive during windows)", cmp.n_pairs);
    println!(
        "mu_eat during windows:    {:.3} -> {:.3}  ({} of {} higher, p={:.3})",
        cmp.baseline_mu_eat,
        cmp.injected_mu_eat,
        cmp.mu_eat_wins,
        cmp.n_pairs - cmp.mu_eat_ties,
        cmp.mu_eat_p
    );
    println!(
        "sanctions during windows: {:.3} -> {:.3}  ({} of {} higher, p={:.3})",
        cmp.baseline_sanctions,
        cmp.injected_sanctions,
        cmp.sanction_wins,
        cmp.n_pairs - cmp.sanction_ties,
        cmp.sanction_p
    );
}
