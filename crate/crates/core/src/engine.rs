//! One population's simulation loop.
//!
//! A round shuffles the living agents, then gives each a turn in that order:
//! observe the preceding agents, update mood, eat, and sanction. After all
//! turns every agent metabolises, the death and reproduction phase runs, and
//! the shared resource regrows.
//!
//! All randomness in a run comes from the world's generator in this order:
//! the turn-order shuffle, one dummy-stimulus draw per turn, then in the
//! death phase per-trait mutation draws for each parent in roster order, then
//! one random-death draw per agent in roster order.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::affect::{self, ObservationContext, ObservedAgent};
use crate::config::SimConfig;
use crate::error::ConfigError;
use crate::experiments::inject_mood;
use crate::genome::{reflect_into, Genome, TraitId};
use crate::metrics::{self, RunResult};
use crate::world::{init_world, AgentState, WorldState};

/// Energy flows of one agent during one round.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AgentRoundDelta {
    pub id: u64,
    pub intake: f64,
    pub metabolism: f64,
    pub sanction_damage_received: f64,
    pub sanction_cost_paid: f64,
    pub sanctions_issued: u32,
    pub mu_eat: f64,
    pub mu_sanction: f64,
    /// Hunger after this turn's meal, same definition as the stimulus.
    pub hunger: f64,
}

impl AgentRoundDelta {
    pub fn net(&self) -> f64 {
        self.intake - self.metabolism - self.sanction_damage_received - self.sanction_cost_paid
    }
}

/// Everything that happened in one round.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RoundLedger {
    /// Step index of the round (the world's `t` before it ran).
    pub t: u64,
    /// One entry per agent alive at the start of the round, in roster order.
    pub agents: Vec<AgentRoundDelta>,
    pub resource_drawn: f64,
    pub resource_added: f64,
    pub sanctions_issued: u64,
    pub births: u64,
    pub deaths_energy: u64,
    pub deaths_random: u64,
    pub energy_start: f64,
    /// Total agent energy after metabolism, before the death phase.
    pub energy_before_death_phase: f64,
    /// Energy carried away by agents removed in the death phase.
    pub energy_removed: f64,
}

impl RoundLedger {
    pub fn total_intake(&self) -> f64 {
        self.agents.iter().map(|a| a.intake).sum()
    }

    pub fn total_metabolism(&self) -> f64 {
        self.agents.iter().map(|a| a.metabolism).sum()
    }

    pub fn total_sanction_damage(&self) -> f64 {
        self.agents.iter().map(|a| a.sanction_damage_received).sum()
    }

    pub fn total_sanction_cost(&self) -> f64 {
        self.agents.iter().map(|a| a.sanction_cost_paid).sum()
    }

    pub fn deaths(&self) -> u64 {
        self.deaths_energy + self.deaths_random
    }
}

/// Counts from the death and reproduction phase.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeathReport {
    pub deaths_energy: u64,
    pub deaths_random: u64,
    pub births: u64,
    pub energy_removed: f64,
}

/// Regrowth added at step `t`: a sinusoid around `growth_mean` reaching
/// `growth_peak`. Never negative.
pub fn replenish_resource(t: u64, config: &SimConfig) -> f64 {
    let phase = 2.0 * std::f64::consts::PI * t as f64 / config.growth_period;
    let amplitude = config.growth_peak - config.growth_mean;
    (config.growth_mean + amplitude * phase.sin()).max(0.0)
}

/// Takes `min(mu_eat, resource)` from the pool.
pub fn eat_step(agent: &mut AgentState, resource: &mut f64) -> f64 {
    let intake = agent.mu_eat.min(*resource).max(0.0);
    *resource = (*resource - intake).max(0.0);
    agent.energy += intake;
    agent.last_consumed = intake;
    intake
}

/// The punisher at `punisher` sanctions every agent in `window` whose last
/// consumption strictly exceeds its current `mu_sanction`. `deltas` is
/// indexed like `agents`. Returns the number of sanctions issued.
pub fn sanction_step(
    agents: &mut [AgentState],
    deltas: &mut [AgentRoundDelta],
    punisher: usize,
    window: &[usize],
    config: &SimConfig,
) -> u32 {
    if !config.social_maintenance {
        return 0;
    }
    let damage = config.sanction_damage;
    let cost = config.sanction_cost();
    let standard = agents[punisher].mu_sanction;
    let mut issued = 0;
    for &target in window {
        if agents[target].last_consumed > standard {
            agents[target].energy -= damage;
            agents[target].last_sanction_loss += damage;
            deltas[target].sanction_damage_received += damage;
            agents[punisher].energy -= cost;
            deltas[punisher].sanction_cost_paid += cost;
            issued += 1;
        }
    }
    deltas[punisher].sanctions_issued += issued;
    issued
}

pub fn metabolise(world: &mut WorldState, config: &SimConfig) {
    for agent in &mut world.agents {
        agent.energy -= config.metabolism;
    }
}

/// Each of the fourteen traits mutates independently with probability
/// `mutation_rate` by adding `Normal(0, mutation_sd^2)`. With bounded traits
/// the result is reflected back into the trait's initialisation range,
/// otherwise the alpha, beta and bite-size clamps apply. Draws one uniform
/// per trait plus one normal per mutated trait.
pub fn mutate_genome<R: Rng + ?Sized>(parent: &Genome, config: &SimConfig, rng: &mut R) -> Genome {
    let mut child = *parent;
    for id in TraitId::GENOME {
        if rng.random::<f64>() < config.mutation_rate {
            let noise: f64 = rng.sample(StandardNormal);
            let mut value = child.get(id).expect("genome trait") + noise * config.mutation_sd;
            if config.bounded_traits {
                let (lo, hi) = id.init_range();
                value = reflect_into(value, lo, hi);
            }
            child.set(id, value);
        }
    }
    if !config.bounded_traits {
        child.clamp_traits();
    }
    child
}

/// Removes starved agents, lets every remaining agent above the threshold
/// split once, then applies the random hazard to everyone including
/// newborns.
pub fn death_and_reproduction(world: &mut WorldState, config: &SimConfig) -> DeathReport {
    let mut report = DeathReport::default();

    let before = world.agents.len();
    world.agents.retain_mut(|a| {
        if a.energy < 0.0 {
            report.energy_removed += a.energy;
            a.alive = false;
        }
        a.alive
    });
    report.deaths_energy = (before - world.agents.len()) as u64;

    let parents = world.agents.len();
    for i in 0..parents {
        if world.agents[i].energy > config.reproduction_threshold {
            let genome = mutate_genome(&world.agents[i].genome, config, &mut world.rng);
            let half = world.agents[i].energy / 2.0;
            world.agents[i].energy = half;
            let id = world.allocate_id();
            world.agents.push(AgentState::new(id, genome, half));
            report.births += 1;
        }
    }

    let WorldState { agents, rng, .. } = world;
    for agent in agents.iter_mut() {
        if rng.random::<f64>() < config.random_death_rate {
            agent.alive = false;
            report.energy_removed += agent.energy;
            report.deaths_random += 1;
        }
    }
    agents.retain(|a| a.alive);
    report
}

/// Up to `size` distinct agents preceding the focal agent: first its
/// predecessors this round, nearest first, then the tail of
/// `previous_order` (empty unless the cross-round window is enabled).
pub fn observation_window(
    predecessors: &[usize],
    previous_order: &[usize],
    focal: usize,
    size: usize,
) -> Vec<usize> {
    let mut window = Vec::with_capacity(size);
    for &idx in predecessors.iter().rev().chain(previous_order.iter().rev()) {
        if window.len() == size {
            break;
        }
        if idx != focal && !window.contains(&idx) {
            window.push(idx);
        }
    }
    window
}

pub fn run_round(world: &mut WorldState, config: &SimConfig) -> RoundLedger {
    let t = world.t;
    let mut ledger = RoundLedger {
        t,
        energy_start: world.agents.iter().map(|a| a.energy).sum(),
        ..RoundLedger::default()
    };

    if world.is_extinct() {
        world.round_order.clear();
    } else {
        run_turns(world, config, &mut ledger);
        metabolise(world, config);
        for (agent, delta) in world.agents.iter_mut().zip(ledger.agents.iter_mut()) {
            delta.metabolism = config.metabolism;
            agent.push_energy_delta(delta.net(), config.d_array_window);
        }
        ledger.energy_before_death_phase = world.agents.iter().map(|a| a.energy).sum();

        let report = death_and_reproduction(world, config);
        ledger.births = report.births;
        ledger.deaths_energy = report.deaths_energy;
        ledger.deaths_random = report.deaths_random;
        ledger.energy_removed = report.energy_removed;
    }

    let regrowth = replenish_resource(t, config);
    world.resource += regrowth;
    ledger.resource_added = regrowth;
    world.t += 1;
    ledger
}

fn run_turns(world: &mut WorldState, config: &SimConfig, ledger: &mut RoundLedger) {
    let WorldState {
        resource,
        t,
        agents,
        round_order,
        rng,
        ..
    } = world;
    let t = *t;

    let index_of: HashMap<u64, usize> = agents.iter().enumerate().map(|(i, a)| (a.id, i)).collect();
    let previous: Vec<usize> = if config.cross_round_window {
        round_order.iter().filter_map(|id| index_of.get(id).copied()).collect()
    } else {
        Vec::new()
    };

    let mut order: Vec<usize> = (0..agents.len()).collect();
    order.shuffle(rng);

    ledger.agents = agents
        .iter()
        .map(|a| AgentRoundDelta {
            id: a.id,
            ..AgentRoundDelta::default()
        })
        .collect();
    let injection = config.injection.filter(|inj| inj.is_active(t));

    for (pos, &idx) in order.iter().enumerate() {
        let window = observation_window(&order[..pos], &previous, idx, config.observation_window);
        let ctx = ObservationContext {
            observed: window
                .iter()
                .map(|&j| ObservedAgent {
                    consumed: agents[j].last_consumed,
                    sanction_loss: agents[j].last_sanction_loss,
                    energy: agents[j].energy,
                })
                .collect(),
        };

        let agent = &mut agents[idx];
        let stimuli = affect::compute_stimuli(agent, &ctx, config.hunger_mode, *resource, rng);
        let delta = affect::mood_delta(&stimuli, &agent.genome);
        agent.mood = affect::update_mood(agent.mood, delta, agent.genome.alpha, agent.genome.beta);
        if let Some(injection) = &injection {
            inject_mood(agent, injection, t);
        }
        let mut behaviour = affect::modulate_behaviour(&agent.genome, agent.mood);
        if config.bounded_traits {
            behaviour = affect::bound_behaviour(behaviour);
        }
        let (mu_eat, mu_sanction) = behaviour;
        agent.mu_eat = mu_eat;
        agent.mu_sanction = mu_sanction;
        agent.last_sanction_loss = 0.0;

        let available = *resource;
        let intake = eat_step(agent, resource);
        let entry = &mut ledger.agents[idx];
        entry.intake = intake;
        entry.mu_eat = mu_eat;
        entry.mu_sanction = mu_sanction;
        entry.hunger = affect::hunger(config.hunger_mode, mu_eat, intake, available);
        ledger.resource_drawn += intake;

        let issued = sanction_step(agents, &mut ledger.agents, idx, &window, config);
        ledger.sanctions_issued += u64::from(issued);
    }

    *round_order = order.iter().map(|&i| agents[i].id).collect();
}

/// Runs `n_steps` rounds from a fresh world, recording per-step metrics and
/// trait snapshots at `snapshot_step` and at the end.
pub fn run_simulation(config: &SimConfig, run_seed: u64) -> Result<RunResult, ConfigError> {
    let mut world = init_world(config, run_seed)?;
    let mut step_series = Vec::with_capacity(config.n_steps as usize);
    let mut snapshots = Vec::new();
    let is_snapshot_step = |t: u64| t == config.snapshot_step || t == config.n_steps;

    if is_snapshot_step(0) {
        snapshots.push(metrics::snapshot_traits(&world, config.social_maintenance));
    }
    while world.t < config.n_steps {
        let ledger = run_round(&mut world, config);
        step_series.push(metrics::record_step(&world, &ledger));
        if is_snapshot_step(world.t) {
            snapshots.push(metrics::snapshot_traits(&world, config.social_maintenance));
        }
    }

    Ok(RunResult::new(config, run_seed, step_series, snapshots, !world.is_extinct()))
}
