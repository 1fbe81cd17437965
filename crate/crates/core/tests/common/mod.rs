#![allow(dead_code)]

use affectsim::config::{HungerMode, InjectionConfig, SimConfig};
use affectsim::engine::{run_round, RoundLedger};
use affectsim::genome::{Genome, StimulusWeights};
use affectsim::metrics::RunResult;
use affectsim::world::{init_world, WorldState};
use proptest::prelude::*;
use sha2::{Digest, Sha256};

/// Hash of everything a run writes: JSON summary and series CSV.
pub fn run_digest(result: &RunResult) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(result).unwrap());
    let mut csv = Vec::new();
    result.write_series_csv(&mut csv).unwrap();
    hasher.update(&csv);
    hex::encode(hasher.finalize())
}

/// Worst absolute violation of the per-round energy and resource identities.
pub fn ledger_error(before: &WorldState, after: &WorldState, ledger: &RoundLedger) -> f64 {
    let turn_change = ledger.energy_before_death_phase - ledger.energy_start;
    let expected = ledger.total_intake()
        - ledger.total_metabolism()
        - ledger.total_sanction_damage()
        - ledger.total_sanction_cost();
    let energy_end: f64 = after.agents.iter().map(|a| a.energy).sum();
    let resource = before.resource - ledger.resource_drawn + ledger.resource_added;
    (turn_change - expected)
        .abs()
        .max((energy_end - (ledger.energy_before_death_phase - ledger.energy_removed)).abs())
        .max((resource - after.resource).abs())
        .max((ledger.total_intake() - ledger.resource_drawn).abs())
}

/// Runs `steps` rounds checking the ledger identities each round.
pub fn worst_ledger_error(config: &SimConfig, seed: u64, steps: u64) -> (f64, f64) {
    let mut world = init_world(config, seed).unwrap();
    let mut worst = 0.0f64;
    let mut min_resource = world.resource;
    for _ in 0..steps {
        let before = world.clone();
        let ledger = run_round(&mut world, config);
        worst = worst.max(ledger_error(&before, &world, &ledger));
        min_resource = min_resource.min(world.resource);
    }
    (worst, min_resource)
}

pub fn zero_weight_genome(bite: f64) -> Genome {
    Genome {
        bite_size: bite,
        sanction_threshold: 0.5,
        alpha: 0.5,
        beta: 0.5,
        stimulus_weights: StimulusWeights::default(),
        eat_mu_weight: 0.0,
        sanction_mu_weight: 0.0,
    }
}

pub fn single_agent_config() -> SimConfig {
    SimConfig {
        n_agents_initial: 1,
        social_maintenance: false,
        sanction_damage: 0.0,
        mutation_rate: 0.0,
        random_death_rate: 0.0,
        n_steps: 100,
        snapshot_step: 100,
        ..SimConfig::default()
    }
}

/// Hand-computed trajectory of one zero-weight agent with bite size `bite`
/// and its offspring while the pool never binds: every agent gains
/// `bite - metabolism` per round and splits in half once above the
/// threshold. Returns sorted energies after each of `steps` rounds.
pub fn closed_form_energies(config: &SimConfig, bite: f64, steps: usize) -> Vec<Vec<f64>> {
    let mut energies = vec![affectsim::world::INITIAL_ENERGY];
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        for e in &mut energies {
            *e += bite;
            *e -= config.metabolism;
        }
        let parents = energies.len();
        for i in 0..parents {
            if energies[i] > config.reproduction_threshold {
                let half = energies[i] / 2.0;
                energies[i] = half;
                energies.push(half);
            }
        }
        let mut sorted = energies.clone();
        sorted.sort_by(f64::total_cmp);
        out.push(sorted);
    }
    out
}

/// Simulated counterpart of [`closed_form_energies`].
pub fn simulated_energies(config: &SimConfig, bite: f64, steps: usize) -> Vec<Vec<f64>> {
    let mut world = init_world(config, 0).unwrap();
    for a in &mut world.agents {
        a.genome = zero_weight_genome(bite);
        a.mu_eat = bite;
        a.mu_sanction = a.genome.sanction_threshold;
    }
    (0..steps)
        .map(|_| {
            run_round(&mut world, config);
            let mut e: Vec<f64> = world.agents.iter().map(|a| a.energy).collect();
            e.sort_by(f64::total_cmp);
            e
        })
        .collect()
}

/// Small random configs spanning every switch.
pub fn fuzzed_config() -> impl Strategy<Value = SimConfig> {
    (
        (1usize..60, 0.0..200.0f64, 0.0..2.0f64, 0.0..0.5f64, any::<bool>()),
        (0.0..0.5f64, 0.0..1.0f64, 0.0..0.05f64, 1usize..15, 1.0..20.0f64),
        (0.0..5.0f64, 0.0..5.0f64, any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>()),
    )
        .prop_map(
            |(
                (n, resource, damage, cost, sm),
                (metabolism, mutation_rate, death, window, threshold),
                (mean, amp, literal, unbounded, cross, inject),
            )| SimConfig {
                n_agents_initial: n,
                resource_initial: resource,
                sanction_damage: damage,
                sanction_cost_factor: cost,
                social_maintenance: sm,
                metabolism,
                mutation_rate,
                random_death_rate: death,
                observation_window: window,
                reproduction_threshold: threshold,
                growth_trough: 0.0,
                growth_mean: mean,
                growth_peak: mean + amp,
                hunger_mode: if literal { HungerMode::Literal } else { HungerMode::Prose },
                bounded_traits: !unbounded,
                cross_round_window: cross,
                injection: inject.then_some(InjectionConfig {
                    period: 20,
                    duration: 5,
                    magnitude: 3.0,
                }),
                n_steps: 120,
                snapshot_step: 60,
                ..SimConfig::default()
            },
        )
}
