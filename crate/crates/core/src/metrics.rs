//! Population-level metrics per step and trait distributions at snapshots.
//!
//! All variances in this crate use the population convention (divide by N):
//! a snapshot is a census of the whole population, not a sample.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::engine::RoundLedger;
use crate::genome::TraitId;
use crate::world::WorldState;

/// One row of a run's CSV series.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StepMetrics {
    pub t: u64,
    /// Living agents after the round.
    pub population: u64,
    /// Mean agent energy after the round.
    pub avg_wellbeing: f64,
    pub hunger_avg: f64,
    pub injuries_from_sanction_avg: f64,
    /// Resource drawn plus sanction damage plus sanction costs.
    pub energy_drain: f64,
    pub resource_level: f64,
    pub births: u64,
    pub deaths: u64,
    pub mean_mu_eat: f64,
    pub mean_mu_sanction: f64,
    pub sanctions_issued: u64,
    pub sanction_damage: f64,
    /// Set when the population is zero after the round; every average is
    /// then recorded as 0.
    pub extinct: bool,
}

fn mean(values: impl Iterator<Item = f64>) -> (f64, usize) {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        (0.0, 0)
    } else {
        (sum / n as f64, n)
    }
}

/// Population mean and variance (divide by N).
pub fn mean_and_variance(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    // Shifting by the first value keeps identical inputs exactly at zero variance.
    let shift = values[0];
    let m = shift + values.iter().map(|v| v - shift).sum::<f64>() / n;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
    Some((m, var.max(0.0)))
}

/// Metrics of the round just completed. Per-turn quantities (hunger,
/// injuries, behaviours) are averaged over the agents that took a turn.
pub fn record_step(world: &WorldState, ledger: &RoundLedger) -> StepMetrics {
    let turn_takers = &ledger.agents;
    let (avg_wellbeing, _) = mean(world.agents.iter().map(|a| a.energy));
    let (hunger_avg, _) = mean(turn_takers.iter().map(|a| a.hunger));
    let (mean_mu_eat, _) = mean(turn_takers.iter().map(|a| a.mu_eat));
    let (mean_mu_sanction, _) = mean(turn_takers.iter().map(|a| a.mu_sanction));
    let sanction_damage = ledger.total_sanction_damage();
    let injuries_from_sanction_avg = if turn_takers.is_empty() {
        0.0
    } else {
        sanction_damage / turn_takers.len() as f64
    };
    StepMetrics {
        t: ledger.t,
        population: world.agents.len() as u64,
        avg_wellbeing,
        hunger_avg,
        injuries_from_sanction_avg,
        energy_drain: ledger.resource_drawn + sanction_damage + ledger.total_sanction_cost(),
        resource_level: world.resource,
        births: ledger.births,
        deaths: ledger.deaths(),
        mean_mu_eat,
        mean_mu_sanction,
        sanctions_issued: ledger.sanctions_issued,
        sanction_damage,
        extinct: world.agents.is_empty(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraitStats {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitSnapshot {
    pub t: u64,
    pub population: u64,
    /// Empty for an extinct population.
    pub traits: BTreeMap<TraitId, TraitStats>,
}

impl TraitSnapshot {
    pub fn is_empty(&self) -> bool {
        self.population == 0
    }

    pub fn get(&self, id: TraitId) -> Option<TraitStats> {
        self.traits.get(&id).copied()
    }
}

/// Mean and variance of the fourteen genome traits and the two realised
/// behaviours. `mu_sanction` is omitted without social maintenance.
pub fn snapshot_traits(world: &WorldState, social_maintenance: bool) -> TraitSnapshot {
    let mut traits = BTreeMap::new();
    if !world.agents.is_empty() {
        for id in TraitId::ALL {
            if id.requires_sanctions() && !social_maintenance {
                continue;
            }
            let values: Vec<f64> = world
                .agents
                .iter()
                .map(|a| match id {
                    TraitId::MuEat => a.mu_eat,
                    TraitId::MuSanction => a.mu_sanction,
                    _ => a.genome.get(id).expect("genome trait"),
                })
                .collect();
            let (mean, variance) = mean_and_variance(&values).expect("non-empty");
            traits.insert(id, TraitStats { mean, variance });
        }
    }
    TraitSnapshot {
        t: world.t,
        population: world.agents.len() as u64,
        traits,
    }
}

/// Outcome of one population's run. The step series is stored separately as
/// CSV; everything else goes to the JSON summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub condition: String,
    pub config_fingerprint: String,
    pub run_seed: u64,
    pub social_maintenance: bool,
    #[serde(rename = "sanction_damage_D")]
    pub sanction_damage: f64,
    pub survived: bool,
    /// Variance of the population-size series.
    pub population_variance: f64,
    pub mean_population: f64,
    pub mean_energy_drain: f64,
    pub mean_sanction_damage: f64,
    pub snapshots: Vec<TraitSnapshot>,
    #[serde(skip)]
    pub step_series: Vec<StepMetrics>,
}

impl RunResult {
    pub fn new(
        config: &SimConfig,
        run_seed: u64,
        step_series: Vec<StepMetrics>,
        snapshots: Vec<TraitSnapshot>,
        survived: bool,
    ) -> Self {
        let mut result = RunResult {
            condition: String::new(),
            config_fingerprint: config.fingerprint(),
            run_seed,
            social_maintenance: config.social_maintenance,
            sanction_damage: config.sanction_damage,
            survived,
            population_variance: 0.0,
            mean_population: 0.0,
            mean_energy_drain: 0.0,
            mean_sanction_damage: 0.0,
            snapshots,
            step_series,
        };
        result.refresh_aggregates();
        result
    }

    /// Recomputes the series aggregates from `step_series`.
    pub fn refresh_aggregates(&mut self) {
        let population: Vec<f64> = self.step_series.iter().map(|s| s.population as f64).collect();
        let (mean_population, population_variance) = mean_and_variance(&population).unwrap_or((0.0, 0.0));
        self.mean_population = mean_population;
        self.population_variance = population_variance;
        self.mean_energy_drain = mean(self.step_series.iter().map(|s| s.energy_drain)).0;
        self.mean_sanction_damage = mean(self.step_series.iter().map(|s| s.sanction_damage)).0;
    }

    pub fn snapshot_at(&self, t: u64) -> Option<&TraitSnapshot> {
        self.snapshots.iter().find(|s| s.t == t)
    }

    pub fn final_snapshot(&self) -> Option<&TraitSnapshot> {
        self.snapshots.iter().max_by_key(|s| s.t)
    }

    pub fn write_series_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        write_series_csv(&self.step_series, writer)
    }
}

/// Header row plus one row per step, columns in [`StepMetrics`] field order.
pub fn write_series_csv<W: Write>(series: &[StepMetrics], writer: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    if series.is_empty() {
        out.write_record(STEP_COLUMNS)?;
    }
    for row in series {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_series_csv<R: Read>(reader: R) -> csv::Result<Vec<StepMetrics>> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

pub const STEP_COLUMNS: [&str; 14] = [
    "t",
    "population",
    "avg_wellbeing",
    "hunger_avg",
    "injuries_from_sanction_avg",
    "energy_drain",
    "resource_level",
    "births",
    "deaths",
    "mean_mu_eat",
    "mean_mu_sanction",
    "sanctions_issued",
    "sanction_damage",
    "extinct",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::AgentRoundDelta;
    use crate::world::init_world;

    #[test]
    fn empty_population_records_zero_averages() {
        let mut world = init_world(&SimConfig::default(), 0).unwrap();
        world.agents.clear();
        let m = record_step(&world, &RoundLedger::default());
        assert!(m.extinct);
        assert_eq!((m.population, m.avg_wellbeing, m.hunger_avg), (0, 0.0, 0.0));
    }

    #[test]
    fn wellbeing_is_mean_energy() {
        let mut world = init_world(&SimConfig::default(), 0).unwrap();
        world.agents.truncate(2);
        world.agents[0].energy = 4.0;
        world.agents[1].energy = 6.0;
        let m = record_step(&world, &RoundLedger::default());
        assert_eq!(m.avg_wellbeing, 5.0);
        assert!(!m.extinct);
    }

    #[test]
    fn energy_drain_sums_intake_and_sanction_losses() {
        let world = init_world(&SimConfig::default(), 0).unwrap();
        let ledger = RoundLedger {
            resource_drawn: 3.2,
            agents: vec![
                AgentRoundDelta {
                    intake: 3.2,
                    sanction_damage_received: 1.2,
                    ..AgentRoundDelta::default()
                },
                AgentRoundDelta {
                    sanction_cost_paid: 0.12,
                    ..AgentRoundDelta::default()
                },
            ],
            ..RoundLedger::default()
        };
        let m = record_step(&world, &ledger);
        assert!((m.energy_drain - 4.52).abs() < 1e-12);
        assert!((m.injuries_from_sanction_avg - 0.6).abs() < 1e-12);
    }

    #[test]
    fn identical_agents_have_zero_variance() {
        let mut world = init_world(&SimConfig::default(), 0).unwrap();
        let template = world.agents[0].clone();
        for a in &mut world.agents {
            *a = template.clone();
        }
        let snap = snapshot_traits(&world, true);
        assert_eq!(snap.traits.len(), 16);
        assert!(snap.traits.values().all(|s| s.variance == 0.0));
    }

    #[test]
    fn fresh_population_moments() {
        let config = SimConfig {
            n_agents_initial: 10_000,
            ..SimConfig::default()
        };
        let world = init_world(&config, 1).unwrap();
        let snap = snapshot_traits(&world, true);
        let b = snap.get(TraitId::BiteSize).unwrap();
        assert!((b.variance - 1.0 / 12.0).abs() < 0.004, "{b:?}");
        let w = snap.get(TraitId::DArrayWeight).unwrap();
        assert!((w.variance - 1.0 / 3.0).abs() < 0.015, "{w:?}");
        assert!((w.mean).abs() < 0.03);
    }

    #[test]
    fn empty_and_no_sanction_snapshots() {
        let mut world = init_world(&SimConfig::default(), 0).unwrap();
        let no_sm = snapshot_traits(&world, false);
        assert!(no_sm.get(TraitId::MuSanction).is_none());
        assert!(no_sm.get(TraitId::MuEat).is_some());
        world.agents.clear();
        let snap = snapshot_traits(&world, true);
        assert!(snap.is_empty());
        assert!(snap.traits.is_empty());
    }

    #[test]
    fn csv_header_matches_fields() {
        let mut buf = Vec::new();
        write_series_csv(&[StepMetrics::default()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), STEP_COLUMNS.join(","));

        let mut buf = Vec::new();
        write_series_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), STEP_COLUMNS.join(","));
    }
}
