//! Stimuli to mood to behaviour for a single hand-built agent.

use affectsim::affect::{self, ObservationContext, ObservedAgent};
use affectsim::config::HungerMode;
use affectsim::genome::{Genome, StimulusWeights};
use affectsim::world::AgentState;

fn main() {
    let genome = Genome {
        bite_size: 0.3,
        sanction_threshold: 0.4,
        alpha: 0.5,
        beta: 0.9,
        stimulus_weights: StimulusWeights {
            hunger: 0.8,
            d_array: 0.5,
            others_violations: -0.6,
            ..StimulusWeights::default()
        },
        eat_mu_weight: 0.2,
        sanction_mu_weight: -0.3,
    };
    let mut agent = AgentState::new(0, genome, 10.0);
    let ctx = ObservationContext {
        observed: vec![
            ObservedAgent { consumed: 0.6, sanction_loss: 0.0, energy: 4.0 },
            ObservedAgent { consumed: 0.2, sanction_loss: 0.6, energy: 11.0 },
        ],
    };

    // A run of lean turns: the agent wants more than the pool gives it.
    for turn in 0..8 {
        let stimuli = affect::compute_stimuli_with_dummy(&agent, &ctx, HungerMode::Prose, 100.0, 0.5);
        let delta = affect::mood_delta(&stimuli, &agent.genome);
        agent.mood = affect::update_mood(agent.mood, delta, agent.genome.alpha, agent.genome.beta);
        let (mu_eat, mu_sanction) = affect::bound_behaviour(affect::modulate_behaviour(&agent.genome, agent.mood));
        println!(
            "turn {turn}: hunger={:.3} violations={:.2} delta={:+.3} mood={:+.3} mu_eat={:.3} mu_sanction={:.3}",
            stimuli.hunger, stimuli.others_violations, delta, agent.mood, mu_eat, mu_sanction
        );
        agent.mu_eat = mu_eat;
        agent.mu_sanction = mu_sanction;
        agent.last_consumed = 0.5 * mu_eat;
        agent.push_energy_delta(agent.last_consumed - 0.1, 10);
    }
}
