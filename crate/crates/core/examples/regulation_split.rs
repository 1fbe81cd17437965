//! Splits surviving populations by how steady their size was and compares
//! energy use and mechanism correlations between the two groups.
//!
//! cargo run --release --example regulation_split -- [runs] [variance threshold]

use affectsim::analysis::{regulation_split, summarize, AnalysisOptions, GroupStats};
use affectsim::config::SimConfig;
use affectsim::experiments::run_condition;
use affectsim::genome::TraitId;

fn show(name: &str, group: &Option<GroupStats>) {
    match group {
        None => println!("{name:<12} empty"),
        Some(g) => println!(
            "{name:<12} n={:<4} drain={:.2} population={:.1} sanction damage={:.3} r(da,em)={} r(sm,da)={}",
            g.n_runs,
            g.mean_energy_drain,
            g.mean_population,
            g.mean_sanction_damage,
            g.d_array_vs_eat_mu.map_or("-".into(), |r| format!("{r:+.2}")),
            g.sanction_mu_vs_d_array.map_or("-".into(), |r| format!("{r:+.2}")),
        ),
    }
}

fn main() {
    let mut args = std::env::args().skip(1);
    let runs: u64 = args.next().map_or(200, |s| s.parse().expect("runs"));
    let threshold: f64 = args.next().map_or(70.0, |s| s.parse().expect("threshold"));
    let results = run_condition(&SimConfig::default(), "sm", runs).expect("runs");

    let split = regulation_split(&results, threshold, None);
    show("regulated", &split.regulated);
    show("unregulated", &split.unregulated);

    let summary = summarize("sm", &results, &AnalysisOptions::default());
    if let Some(m) = &summary.correlation_matrix {
        println!("\ncorrelations with eat_mu_weight over {} surviving runs:", m.n_runs);
        for &id in &m.traits {
            if let Some(r) = m.get(id, TraitId::EatMuWeight) {
                println!("  {:<30} {r:+.2}", id.name());
            }
        }
    }
}
