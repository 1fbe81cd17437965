//! One population under the default social-maintenance condition.
//!
//! cargo run --release --example single_run -- [seed]

use affectsim::config::SimConfig;
use affectsim::engine::run_simulation;
use affectsim::genome::TraitId;

fn main() {
    let seed: u64 = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let config = SimConfig::default();
    let result = run_simulation(&config, seed).expect("valid config");

    println!("seed {seed}: survived={} population variance={:.1}", result.survived, result.population_variance);
    println!("{:>6} {:>5} {:>9} {:>9} {:>7} {:>8}", "t", "pop", "resource", "wellbeing", "mu_eat", "sanctions");
    for s in result.step_series.iter().step_by(200) {
        println!(
            "{:>6} {:>5} {:>9.1} {:>9.2} {:>7.3} {:>8}",
            s.t, s.population, s.resource_level, s.avg_wellbeing, s.mean_mu_eat, s.sanctions_issued
        );
    }

    if let Some(snap) = result.snapshot_at(config.snapshot_step).filter(|s| !s.is_empty()) {
        println!("\ntraits at t={} (mean, variance):", snap.t);
        for id in TraitId::ALL {
            if let Some(st) = snap.get(id) {
                println!("  {:<30} {:>8.3} {:>8.4}", id.name(), st.mean, st.variance);
            }
        }
    }
}
