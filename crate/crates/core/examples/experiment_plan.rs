//! Loads a plan file, writes the full result tree, then re-analyses the
//! stored results with stricter thresholds.
//!
//! cargo run --release --example experiment_plan -- [plan] [out dir]

use std::path::PathBuf;

use affectsim::analysis::AnalysisOptions;
use affectsim::experiments::{analyze_dir, run_experiment, ExperimentPlan};

fn main() {
    let mut args = std::env::args().skip(1);
    let plan_path = args
        .next()
        .map_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/plans/quick.toml")), PathBuf::from);
    let mut plan = ExperimentPlan::load(&plan_path).expect("plan");
    if let Some(out) = args.next() {
        plan.out_dir = out.into();
    }

    let report = run_experiment(&plan, None).expect("experiment");
    for row in &report.sweep {
        println!("{:<10} survival {:.2}", row.condition, row.survival_rate);
    }

    let mut strict = AnalysisOptions::default();
    strict.thresholds.c1 = 0.5;
    let again = analyze_dir(&plan.out_dir, &strict).expect("analysis");
    for s in &again.summaries {
        let norms: Vec<&str> = s
            .traits
            .iter()
            .filter(|t| t.classification.is_some_and(|c| c.label().starts_with("norm")))
            .map(|t| t.trait_id.name())
            .collect();
        println!("{:<10} norms at c1=0.5: {}", s.condition, norms.join(", "));
    }
    println!("results in {}", plan.out_dir.display());
}
