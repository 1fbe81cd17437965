//! Agent and world state, and world initialisation.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SimConfig;
use crate::error::ConfigError;
use crate::genome::Genome;

/// Energy every agent starts with.
pub const INITIAL_ENERGY: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub id: u64,
    pub genome: Genome,
    pub energy: f64,
    pub mood: f64,
    /// Net energy change of each of the most recent rounds, oldest first.
    pub energy_delta_history: VecDeque<f64>,
    /// Resource actually taken on the agent's most recent turn.
    pub last_consumed: f64,
    /// Sanction damage received since the agent's own most recent turn.
    pub last_sanction_loss: f64,
    /// Eating behaviour realised on the most recent turn.
    pub mu_eat: f64,
    /// Sanctioning threshold realised on the most recent turn.
    pub mu_sanction: f64,
    pub alive: bool,
}

impl AgentState {
    /// A fresh agent with zero mood and empty history. Its behaviours start
    /// at the unmodulated baseline `(max(0, B), S)`.
    pub fn new(id: u64, genome: Genome, energy: f64) -> Self {
        Self {
            id,
            mu_eat: genome.bite_size.max(0.0),
            mu_sanction: genome.sanction_threshold,
            genome,
            energy,
            mood: 0.0,
            energy_delta_history: VecDeque::new(),
            last_consumed: 0.0,
            last_sanction_loss: 0.0,
            alive: true,
        }
    }

    /// Appends a per-round energy delta, keeping at most `window` entries.
    pub fn push_energy_delta(&mut self, delta: f64, window: usize) {
        if window == 0 {
            self.energy_delta_history.clear();
            return;
        }
        while self.energy_delta_history.len() >= window {
            self.energy_delta_history.pop_front();
        }
        self.energy_delta_history.push_back(delta);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub resource: f64,
    /// Number of completed rounds.
    pub t: u64,
    /// Living agents. Newborns are appended.
    pub agents: Vec<AgentState>,
    /// Turn order (agent ids) of the most recent round. Empty before round 0.
    pub round_order: Vec<u64>,
    pub next_id: u64,
    pub rng: ChaCha8Rng,
}

impl WorldState {
    pub fn population(&self) -> usize {
        self.agents.len()
    }

    pub fn is_extinct(&self) -> bool {
        self.agents.is_empty()
    }

    pub(crate) fn allocate_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }
}

/// Generator for one run: ChaCha8 keyed by SHA-256 of the two seeds, so runs
/// sharing a master seed draw from unrelated streams.
pub fn run_rng(master_seed: u64, run_seed: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(b"affectsim/run");
    hasher.update(master_seed.to_le_bytes());
    hasher.update(run_seed.to_le_bytes());
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(seed)
}

/// Builds the initial population. Genomes are drawn agent by agent in
/// roster order.
pub fn init_world(config: &SimConfig, run_seed: u64) -> Result<WorldState, ConfigError> {
    config.validate()?;
    let mut rng = run_rng(config.master_seed, run_seed);
    let agents = (0..config.n_agents_initial as u64)
        .map(|id| AgentState::new(id, Genome::random(&mut rng), INITIAL_ENERGY))
        .collect();
    Ok(WorldState {
        resource: config.resource_initial,
        t: 0,
        agents,
        round_order: Vec::new(),
        next_id: config.n_agents_initial as u64,
        rng,
    })
}
