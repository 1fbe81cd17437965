//! The evolvable disposition: stimuli drive a scalar mood, and mood shifts
//! the baseline eating and sanctioning behaviours.
//!
//! Per turn an agent computes its [`StimulusVector`], folds it into a mood
//! delta through its stimulus weights ([`mood_delta`]), updates its mood with
//! gain `alpha` and decay `beta` ([`update_mood`]), and finally derives
//! `mu_eat` and `mu_sanction` from bite size B and threshold S
//! ([`modulate_behaviour`]).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::HungerMode;
use crate::genome::Genome;
use crate::world::AgentState;

/// Observed agents with less energy than this count as near death.
pub const NEAR_DEATH_ENERGY: f64 = 1.0;
/// Observed agents with more energy than this count as near birth.
pub const NEAR_BIRTH_ENERGY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StimulusVector {
    pub hunger: f64,
    pub injured: f64,
    pub others_near_death: f64,
    pub others_near_birth: f64,
    pub others_being_punished: f64,
    pub d_array: f64,
    pub others_violations: f64,
    pub dummy: f64,
}

impl StimulusVector {
    /// Channels in the same order as [`crate::genome::StimulusWeights::to_array`].
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.hunger,
            self.injured,
            self.others_near_death,
            self.others_near_birth,
            self.others_being_punished,
            self.d_array,
            self.others_violations,
            self.dummy,
        ]
    }

    pub fn from_array(values: [f64; 8]) -> Self {
        let [hunger, injured, others_near_death, others_near_birth, others_being_punished, d_array, others_violations, dummy] =
            values;
        Self {
            hunger,
            injured,
            others_near_death,
            others_near_birth,
            others_being_punished,
            d_array,
            others_violations,
            dummy,
        }
    }
}

/// What a focal agent sees of one agent in its observation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservedAgent {
    pub consumed: f64,
    pub sanction_loss: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ObservationContext {
    pub observed: Vec<ObservedAgent>,
}

impl ObservationContext {
    fn ratio(&self, pred: impl Fn(&ObservedAgent) -> bool) -> f64 {
        if self.observed.is_empty() {
            return 0.0;
        }
        self.observed.iter().filter(|o| pred(o)).count() as f64 / self.observed.len() as f64
    }
}

/// Hunger as the unfulfilled part of the previous turn's desire, or the
/// literal resource-minus-desire variant.
pub fn hunger(mode: HungerMode, mu_eat_prev: f64, consumed: f64, resource: f64) -> f64 {
    match mode {
        HungerMode::Prose => (mu_eat_prev - consumed).max(0.0),
        HungerMode::Literal => resource - mu_eat_prev,
    }
}

pub fn mean_delta(agent: &AgentState) -> f64 {
    let history = &agent.energy_delta_history;
    if history.is_empty() {
        0.0
    } else {
        history.iter().sum::<f64>() / history.len() as f64
    }
}

/// Stimuli with an externally supplied dummy value. A pure function of its
/// inputs.
pub fn compute_stimuli_with_dummy(
    agent: &AgentState,
    ctx: &ObservationContext,
    hunger_mode: HungerMode,
    resource: f64,
    dummy: f64,
) -> StimulusVector {
    let standard = agent.mu_sanction;
    StimulusVector {
        hunger: hunger(hunger_mode, agent.mu_eat, agent.last_consumed, resource),
        injured: agent.last_sanction_loss,
        others_near_death: ctx.ratio(|o| o.energy < NEAR_DEATH_ENERGY),
        others_near_birth: ctx.ratio(|o| o.energy > NEAR_BIRTH_ENERGY),
        others_being_punished: ctx.observed.iter().map(|o| o.sanction_loss).sum(),
        d_array: mean_delta(agent),
        others_violations: ctx.ratio(|o| o.consumed > standard),
        dummy,
    }
}

/// Stimuli for the focal agent's turn. `agent.mu_eat` and `agent.mu_sanction`
/// still hold the previous turn's behaviours. Draws exactly one uniform value
/// for the dummy channel.
pub fn compute_stimuli<R: Rng + ?Sized>(
    agent: &AgentState,
    ctx: &ObservationContext,
    hunger_mode: HungerMode,
    resource: f64,
    rng: &mut R,
) -> StimulusVector {
    let dummy = rng.random::<f64>();
    compute_stimuli_with_dummy(agent, ctx, hunger_mode, resource, dummy)
}

pub fn mood_delta(stimuli: &StimulusVector, genome: &Genome) -> f64 {
    stimuli
        .to_array()
        .iter()
        .zip(genome.stimulus_weights.to_array())
        .map(|(s, w)| s * w)
        .sum()
}

pub fn update_mood(mood_prev: f64, delta: f64, alpha: f64, beta: f64) -> f64 {
    (mood_prev + delta * alpha) * beta
}

/// Returns `(mu_eat, mu_sanction)`. Only `mu_eat` is clamped.
pub fn modulate_behaviour(genome: &Genome, mood: f64) -> (f64, f64) {
    let mu_eat = (genome.bite_size + mood * genome.eat_mu_weight).max(0.0);
    let mu_sanction = genome.sanction_threshold + mood * genome.sanction_mu_weight;
    (mu_eat, mu_sanction)
}

/// Upper end of the behaviour range used with bounded traits.
pub const BEHAVIOUR_MAX: f64 = 1.0;

/// Limits both behaviours to `[0, BEHAVIOUR_MAX]`, the range B and S are
/// drawn from. Without it a large mood makes an agent take the whole pool in
/// one bite.
pub fn bound_behaviour((mu_eat, mu_sanction): (f64, f64)) -> (f64, f64) {
    (mu_eat.clamp(0.0, BEHAVIOUR_MAX), mu_sanction.clamp(0.0, BEHAVIOUR_MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::StimulusWeights;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn genome_with(weights: [f64; 8]) -> Genome {
        Genome {
            bite_size: 0.5,
            sanction_threshold: 0.5,
            alpha: 1.0,
            beta: 1.0,
            stimulus_weights: StimulusWeights::from_array(weights),
            eat_mu_weight: 0.0,
            sanction_mu_weight: 0.0,
        }
    }

    fn agent() -> AgentState {
        AgentState::new(0, genome_with([0.0; 8]), 10.0)
    }

    fn observed(energy: f64) -> ObservedAgent {
        ObservedAgent {
            consumed: 0.0,
            sanction_loss: 0.0,
            energy,
        }
    }

    #[test]
    fn empty_window_gives_zero_social_stimuli() {
        let s = compute_stimuli_with_dummy(&agent(), &ObservationContext::default(), HungerMode::Prose, 100.0, 0.3);
        assert_eq!(s.others_near_death, 0.0);
        assert_eq!(s.others_near_birth, 0.0);
        assert_eq!(s.others_being_punished, 0.0);
        assert_eq!(s.others_violations, 0.0);
        assert_eq!(s.dummy, 0.3);
    }

    #[test]
    fn symmetric_history_has_zero_d_array() {
        let mut a = agent();
        for d in [1.0, -1.0, 1.0, -1.0] {
            a.push_energy_delta(d, 10);
        }
        let s = compute_stimuli_with_dummy(&a, &ObservationContext::default(), HungerMode::Prose, 0.0, 0.0);
        assert_eq!(s.d_array, 0.0);
    }

    #[test]
    fn near_death_ratio() {
        let mut ctx = ObservationContext::default();
        for i in 0..10 {
            ctx.observed.push(observed(if i < 3 { 0.5 } else { 5.0 }));
        }
        let s = compute_stimuli_with_dummy(&agent(), &ctx, HungerMode::Prose, 0.0, 0.0);
        assert!((s.others_near_death - 0.3).abs() < 1e-15);
        assert_eq!(s.others_near_birth, 0.0);
    }

    #[test]
    fn social_stimuli() {
        let mut a = agent();
        a.mu_sanction = 0.5;
        a.mu_eat = 0.8;
        a.last_consumed = 0.3;
        a.last_sanction_loss = 1.2;
        let ctx = ObservationContext {
            observed: vec![
                ObservedAgent { consumed: 0.9, sanction_loss: 0.6, energy: 12.0 },
                ObservedAgent { consumed: 0.5, sanction_loss: 0.0, energy: 10.0 },
                ObservedAgent { consumed: 0.2, sanction_loss: 1.8, energy: 0.2 },
                ObservedAgent { consumed: 0.7, sanction_loss: 0.0, energy: 11.0 },
            ],
        };
        let s = compute_stimuli_with_dummy(&a, &ctx, HungerMode::Prose, 40.0, 0.0);
        assert!((s.hunger - 0.5).abs() < 1e-15);
        assert_eq!(s.injured, 1.2);
        assert_eq!(s.others_near_birth, 0.5);
        assert_eq!(s.others_near_death, 0.25);
        assert!((s.others_being_punished - 2.4).abs() < 1e-12);
        assert_eq!(s.others_violations, 0.5);

        let literal = compute_stimuli_with_dummy(&a, &ctx, HungerMode::Literal, 40.0, 0.0);
        assert!((literal.hunger - 39.2).abs() < 1e-12);
    }

    #[test]
    fn hunger_is_never_negative_in_prose_mode() {
        assert_eq!(hunger(HungerMode::Prose, 0.2, 0.5, 0.0), 0.0);
    }

    #[test]
    fn dummy_comes_from_the_generator() {
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let ctx = ObservationContext::default();
        let s1 = compute_stimuli(&agent(), &ctx, HungerMode::Prose, 0.0, &mut r1);
        let s2 = compute_stimuli(&agent(), &ctx, HungerMode::Prose, 0.0, &mut r2);
        assert_eq!(s1, s2);
        assert!((0.0..1.0).contains(&s1.dummy));
    }

    #[test]
    fn mood_delta_examples() {
        let s = StimulusVector::from_array([0.3, 1.0, 0.2, 0.9, 4.0, -2.0, 0.1, 0.7]);
        assert_eq!(mood_delta(&s, &genome_with([0.0; 8])), 0.0);

        let mut w = [0.0; 8];
        w[3] = -2.0;
        let mut one = [0.0; 8];
        one[3] = 0.5;
        assert_eq!(mood_delta(&StimulusVector::from_array(one), &genome_with(w)), -1.0);
    }

    #[test]
    fn update_mood_examples() {
        assert_eq!(update_mood(0.0, 0.0, 0.3, 0.7), 0.0);
        assert_eq!(update_mood(10.0, 0.0, 0.3, 0.5), 5.0);
        assert!((update_mood(1.0, 2.0, 0.5, 0.8) - 1.6).abs() < 1e-15);
    }

    #[test]
    fn modulate_examples() {
        let mut g = genome_with([0.0; 8]);
        g.bite_size = 0.5;
        g.sanction_threshold = 0.3;
        g.eat_mu_weight = 0.2;
        assert_eq!(modulate_behaviour(&g, 0.0), (0.5, 0.3));
        let (mu_eat, _) = modulate_behaviour(&g, 1.0);
        assert!((mu_eat - 0.7).abs() < 1e-15);

        g.bite_size = 0.1;
        g.eat_mu_weight = 0.5;
        assert_eq!(modulate_behaviour(&g, -5.0).0, 0.0);

        g.sanction_mu_weight = 1.0;
        assert_eq!(modulate_behaviour(&g, -5.0).1, -4.7);
    }

    fn weights() -> impl Strategy<Value = [f64; 8]> {
        prop::array::uniform8(-10.0f64..10.0)
    }

    proptest! {
        #[test]
        fn all_ones_stimuli_sum_the_weights(w in weights()) {
            let s = StimulusVector::from_array([1.0; 8]);
            let mut expected = 0.0;
            for wi in w {
                expected += wi;
            }
            prop_assert!((mood_delta(&s, &genome_with(w)) - expected).abs() < 1e-12);
        }

        #[test]
        fn mood_delta_matches_scalar_loop(s in weights(), w in weights()) {
            let mut expected = 0.0;
            for i in 0..8 {
                expected += s[i] * w[i];
            }
            let got = mood_delta(&StimulusVector::from_array(s), &genome_with(w));
            prop_assert!((got - expected).abs() < 1e-12);
        }

        #[test]
        fn mood_delta_is_linear(s1 in weights(), s2 in weights(), w in weights(), a in -5.0f64..5.0) {
            let g = genome_with(w);
            let combined: Vec<f64> = s1.iter().zip(s2).map(|(x, y)| a * x + y).collect();
            let combined = StimulusVector::from_array(combined.try_into().unwrap());
            let lhs = mood_delta(&combined, &g);
            let rhs = a * mood_delta(&StimulusVector::from_array(s1), &g)
                + mood_delta(&StimulusVector::from_array(s2), &g);
            prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()));
        }

        #[test]
        fn mu_eat_never_negative(b in 0.0f64..5.0, w in -10.0f64..10.0, mood in -1e4f64..1e4) {
            let mut g = genome_with([0.0; 8]);
            g.bite_size = b;
            g.eat_mu_weight = w;
            prop_assert!(modulate_behaviour(&g, mood).0 >= 0.0);
        }

        #[test]
        fn bounded_behaviour_stays_in_range(b in 0.0f64..=1.0, s in 0.0f64..=1.0, we in -1.0f64..=1.0, ws in -1.0f64..=1.0, mood in -1e6f64..1e6) {
            let mut g = genome_with([0.0; 8]);
            g.bite_size = b;
            g.sanction_threshold = s;
            g.eat_mu_weight = we;
            g.sanction_mu_weight = ws;
            let raw = modulate_behaviour(&g, mood);
            let (mu_eat, mu_sanction) = bound_behaviour(raw);
            prop_assert!((0.0..=BEHAVIOUR_MAX).contains(&mu_eat));
            prop_assert!((0.0..=BEHAVIOUR_MAX).contains(&mu_sanction));
            // Values already inside the range pass through unchanged.
            if (0.0..=1.0).contains(&raw.0) {
                prop_assert_eq!(mu_eat, raw.0);
            }
        }

        #[test]
        fn zero_beta_resets_mood(m in -1e6f64..1e6, d in -1e6f64..1e6, alpha in 0.0f64..=1.0) {
            prop_assert_eq!(update_mood(m, d, alpha, 0.0), 0.0);
        }

        #[test]
        fn zero_weight_mood_decays_geometrically(m0 in -100.0f64..100.0, beta in 0.0f64..=1.0, steps in 1usize..200) {
            let g = genome_with([0.0; 8]);
            let s = StimulusVector::from_array([0.7; 8]);
            let mut mood = m0;
            for _ in 0..steps {
                mood = update_mood(mood, mood_delta(&s, &g), 0.9, beta);
            }
            // Repeated multiplication is the exact recurrence; powi may differ
            // by an ulp of rounding.
            let closed = m0 * beta.powi(steps as i32);
            prop_assert!((mood - closed).abs() <= 1e-12 * m0.abs().max(1e-300));
        }

        #[test]
        fn stimuli_are_pure_given_dummy(energy in 0.0f64..20.0, consumed in 0.0f64..2.0, loss in 0.0f64..5.0) {
            let mut a = agent();
            a.last_consumed = consumed;
            a.last_sanction_loss = loss;
            let ctx = ObservationContext { observed: vec![observed(energy); 4] };
            let s1 = compute_stimuli_with_dummy(&a, &ctx, HungerMode::Prose, 10.0, 0.4);
            let s2 = compute_stimuli_with_dummy(&a, &ctx, HungerMode::Prose, 10.0, 0.4);
            prop_assert_eq!(s1, s2);
            prop_assert!((0.0..=1.0).contains(&s1.others_near_death));
            prop_assert!((0.0..=1.0).contains(&s1.others_near_birth));
            prop_assert!((0.0..=1.0).contains(&s1.others_violations));
        }
    }
}
