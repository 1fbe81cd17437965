//! Survival and the focal trait correlations across sanction damage values.
//!
//! cargo run --release --example damage_sweep -- [runs per D]

use affectsim::analysis::{summarize, AnalysisOptions, SweepRow};
use affectsim::config::SimConfig;
use affectsim::experiments::{run_condition, ExperimentPlan};

fn main() {
    let runs: u64 = std::env::args().nth(1).map_or(50, |s| s.parse().expect("runs"));
    let plan = ExperimentPlan::damage_sweep(SimConfig::default(), &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0], runs);
    let options = AnalysisOptions::default();
    let fmt = |r: Option<f64>| r.map_or("   -".into(), |r| format!("{r:+.2}"));

    println!("{:<6} {:>9} {:>10} {:>13} {:>10}", "D", "survival", "r(da,em)", "r(sm,da)", "r(hu,da)");
    for (label, config) in plan.resolve().expect("valid plan") {
        let results = run_condition(&config, &label, runs).expect("runs");
        let row = SweepRow::from(&summarize(&label, &results, &options));
        println!(
            "{:<6} {:>9.3} {:>10} {:>13} {:>10}",
            row.sanction_damage,
            row.survival_rate,
            fmt(row.r_d_array_eat_mu),
            fmt(row.r_sanction_mu_d_array),
            fmt(row.r_hunger_d_array)
        );
    }
}
