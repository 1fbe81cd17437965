//! Evolvable traits of an agent.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

/// Weights mapping each stimulus channel onto the mood delta.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StimulusWeights {
    pub hunger: f64,
    pub injured: f64,
    pub others_near_death: f64,
    pub others_near_birth: f64,
    pub others_being_punished: f64,
    pub d_array: f64,
    pub others_violations: f64,
    pub dummy: f64,
}

impl StimulusWeights {
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

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    pub bite_size: f64,
    pub sanction_threshold: f64,
    pub alpha: f64,
    pub beta: f64,
    pub stimulus_weights: StimulusWeights,
    pub eat_mu_weight: f64,
    pub sanction_mu_weight: f64,
}

/// Every trait that gets summarised across a population.
///
/// The first fourteen are heritable genome traits; `MuEat` and `MuSanction`
/// are the mood-modulated behaviours realised in the most recent turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TraitId {
    BiteSize,
    SanctionThreshold,
    Alpha,
    Beta,
    HungerWeight,
    InjuredWeight,
    OthersNearDeathWeight,
    OthersNearBirthWeight,
    OthersBeingPunishedWeight,
    DArrayWeight,
    OthersViolationsWeight,
    DummyWeight,
    EatMuWeight,
    SanctionMuWeight,
    MuEat,
    MuSanction,
}

impl TraitId {
    /// Genome traits in their fixed draw and mutation order.
    pub const GENOME: [TraitId; 14] = [
        TraitId::BiteSize,
        TraitId::SanctionThreshold,
        TraitId::Alpha,
        TraitId::Beta,
        TraitId::HungerWeight,
        TraitId::InjuredWeight,
        TraitId::OthersNearDeathWeight,
        TraitId::OthersNearBirthWeight,
        TraitId::OthersBeingPunishedWeight,
        TraitId::DArrayWeight,
        TraitId::OthersViolationsWeight,
        TraitId::DummyWeight,
        TraitId::EatMuWeight,
        TraitId::SanctionMuWeight,
    ];

    pub const ALL: [TraitId; 16] = [
        TraitId::BiteSize,
        TraitId::SanctionThreshold,
        TraitId::Alpha,
        TraitId::Beta,
        TraitId::HungerWeight,
        TraitId::InjuredWeight,
        TraitId::OthersNearDeathWeight,
        TraitId::OthersNearBirthWeight,
        TraitId::OthersBeingPunishedWeight,
        TraitId::DArrayWeight,
        TraitId::OthersViolationsWeight,
        TraitId::DummyWeight,
        TraitId::EatMuWeight,
        TraitId::SanctionMuWeight,
        TraitId::MuEat,
        TraitId::MuSanction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TraitId::BiteSize => "bite_size",
            TraitId::SanctionThreshold => "sanction_threshold",
            TraitId::Alpha => "alpha",
            TraitId::Beta => "beta",
            TraitId::HungerWeight => "hunger_weight",
            TraitId::InjuredWeight => "injured_weight",
            TraitId::OthersNearDeathWeight => "others_near_death_weight",
            TraitId::OthersNearBirthWeight => "others_near_birth_weight",
            TraitId::OthersBeingPunishedWeight => "others_being_punished_weight",
            TraitId::DArrayWeight => "d_array_weight",
            TraitId::OthersViolationsWeight => "others_violations_weight",
            TraitId::DummyWeight => "dummy_weight",
            TraitId::EatMuWeight => "eat_mu_weight",
            TraitId::SanctionMuWeight => "sanction_mu_weight",
            TraitId::MuEat => "mu_eat",
            TraitId::MuSanction => "mu_sanction",
        }
    }

    pub fn is_behaviour(self) -> bool {
        matches!(self, TraitId::MuEat | TraitId::MuSanction)
    }

    pub fn is_weight(self) -> bool {
        !self.is_behaviour()
            && !matches!(
                self,
                TraitId::BiteSize | TraitId::SanctionThreshold | TraitId::Alpha | TraitId::Beta
            )
    }

    /// Range a genome trait is drawn from at initialisation.
    pub fn init_range(self) -> (f64, f64) {
        if self.is_weight() {
            (-1.0, 1.0)
        } else {
            (0.0, 1.0)
        }
    }

    /// Variance of the trait's initialisation distribution: Uniform[0,1] for
    /// B, S, alpha, beta (and the behaviours, which start at B and S), and
    /// Uniform[-1,1] for the ten weights.
    pub fn baseline_variance(self) -> f64 {
        if self.is_weight() {
            1.0 / 3.0
        } else {
            1.0 / 12.0
        }
    }

    /// Only relevant when agents can sanction each other.
    pub fn requires_sanctions(self) -> bool {
        matches!(self, TraitId::MuSanction)
    }
}

impl fmt::Display for TraitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TraitId {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TraitId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| AnalysisError::UnknownTrait(s.to_string()))
    }
}

impl From<TraitId> for String {
    fn from(value: TraitId) -> Self {
        value.name().to_string()
    }
}

impl TryFrom<String> for TraitId {
    type Error = AnalysisError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl Genome {
    /// Uniform[0,1] for B, S, alpha, beta and Uniform[-1,1] for the weights,
    /// drawn in [`TraitId::GENOME`] order.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut genome = Genome {
            bite_size: 0.0,
            sanction_threshold: 0.0,
            alpha: 0.0,
            beta: 0.0,
            stimulus_weights: StimulusWeights::default(),
            eat_mu_weight: 0.0,
            sanction_mu_weight: 0.0,
        };
        for id in TraitId::GENOME {
            let value = if id.is_weight() {
                rng.random_range(-1.0..=1.0)
            } else {
                rng.random_range(0.0..=1.0)
            };
            genome.set(id, value);
        }
        genome
    }

    /// Genome trait value; `None` for the realised behaviours.
    pub fn get(&self, id: TraitId) -> Option<f64> {
        let w = &self.stimulus_weights;
        Some(match id {
            TraitId::BiteSize => self.bite_size,
            TraitId::SanctionThreshold => self.sanction_threshold,
            TraitId::Alpha => self.alpha,
            TraitId::Beta => self.beta,
            TraitId::HungerWeight => w.hunger,
            TraitId::InjuredWeight => w.injured,
            TraitId::OthersNearDeathWeight => w.others_near_death,
            TraitId::OthersNearBirthWeight => w.others_near_birth,
            TraitId::OthersBeingPunishedWeight => w.others_being_punished,
            TraitId::DArrayWeight => w.d_array,
            TraitId::OthersViolationsWeight => w.others_violations,
            TraitId::DummyWeight => w.dummy,
            TraitId::EatMuWeight => self.eat_mu_weight,
            TraitId::SanctionMuWeight => self.sanction_mu_weight,
            TraitId::MuEat | TraitId::MuSanction => return None,
        })
    }

    /// Sets a genome trait. Behaviours are not stored in the genome and are
    /// ignored.
    pub fn set(&mut self, id: TraitId, value: f64) {
        let w = &mut self.stimulus_weights;
        let slot = match id {
            TraitId::BiteSize => &mut self.bite_size,
            TraitId::SanctionThreshold => &mut self.sanction_threshold,
            TraitId::Alpha => &mut self.alpha,
            TraitId::Beta => &mut self.beta,
            TraitId::HungerWeight => &mut w.hunger,
            TraitId::InjuredWeight => &mut w.injured,
            TraitId::OthersNearDeathWeight => &mut w.others_near_death,
            TraitId::OthersNearBirthWeight => &mut w.others_near_birth,
            TraitId::OthersBeingPunishedWeight => &mut w.others_being_punished,
            TraitId::DArrayWeight => &mut w.d_array,
            TraitId::OthersViolationsWeight => &mut w.others_violations,
            TraitId::DummyWeight => &mut w.dummy,
            TraitId::EatMuWeight => &mut self.eat_mu_weight,
            TraitId::SanctionMuWeight => &mut self.sanction_mu_weight,
            TraitId::MuEat | TraitId::MuSanction => return,
        };
        *slot = value;
    }

    /// alpha and beta into [0,1], bite size to >= 0. S and the weights are
    /// unbounded.
    pub fn clamp_traits(&mut self) {
        self.alpha = self.alpha.clamp(0.0, 1.0);
        self.beta = self.beta.clamp(0.0, 1.0);
        self.bite_size = self.bite_size.max(0.0);
    }
}

/// Folds `value` back into `[lo, hi]` by mirroring at the bounds, so a
/// mutation that overshoots lands as far inside as it overshot.
pub fn reflect_into(value: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    if width.is_nan() || width <= 0.0 || !value.is_finite() {
        return value.clamp(lo, hi);
    }
    let x = (value - lo).rem_euclid(2.0 * width);
    let folded = if x > width { 2.0 * width - x } else { x };
    (lo + folded).clamp(lo, hi)
}
