//! Mean of variance, variance of mean and the norm verdict for every trait,
//! with and without social maintenance.
//!
//! cargo run --release --example norm_classification -- [runs]

use affectsim::analysis::{summarize, AnalysisOptions};
use affectsim::config::SimConfig;
use affectsim::experiments::run_condition;

fn main() {
    let runs: u64 = std::env::args().nth(1).map_or(100, |s| s.parse().expect("runs"));
    let options = AnalysisOptions::default();
    let conditions = [
        ("no-sm", SimConfig { social_maintenance: false, sanction_damage: 0.0, ..SimConfig::default() }),
        ("sm", SimConfig::default()),
    ];
    for (label, config) in conditions {
        let results = run_condition(&config, label, runs).expect("runs");
        let summary = summarize(label, &results, &options);
        println!("\n{label}: {} of {} survived", summary.n_survived, summary.n_runs);
        println!("  {:<30} {:>8} {:>8}  verdict", "trait", "mov", "vom");
        for t in &summary.traits {
            println!(
                "  {:<30} {:>8.4} {:>8.4}  {}",
                t.trait_id.name(),
                t.mean_of_variance.unwrap_or(f64::NAN),
                t.variance_of_mean.unwrap_or(f64::NAN),
                t.classification.map_or("-", |c| c.label())
            );
        }
    }
}
