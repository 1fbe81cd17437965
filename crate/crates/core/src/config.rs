//! Simulation parameters and their validation.
//!
//! A [`SimConfig`] is loaded from a single JSON or TOML file whose keys are
//! exactly the field names below. Every field has a default, so a config file
//! only needs to list the keys it overrides.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ConfigError;

/// How the hunger stimulus is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum HungerMode {
    /// Unfulfilled desire: `max(0, mu_eat - consumed)` from the previous turn.
    #[default]
    Prose,
    /// Global resource level minus the previous `mu_eat`.
    Literal,
}

impl std::str::FromStr for HungerMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prose" => Ok(HungerMode::Prose),
            "literal" => Ok(HungerMode::Literal),
            other => Err(ConfigError::Invalid {
                field: "hunger_mode",
                reason: format!("unknown mode {other:?}, expected prose or literal"),
            }),
        }
    }
}

/// Periodic mood injection.
///
/// Windows open at every positive multiple of `period` and stay open for
/// `duration` steps, so with the defaults injection happens on
/// `[500, 700)`, `[1000, 1200)` and `[1500, 1700)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InjectionConfig {
    pub period: u64,
    pub duration: u64,
    pub magnitude: f64,
}

impl Default for InjectionConfig {
    fn default() -> Self {
        Self {
            period: 500,
            duration: 200,
            magnitude: 200.0,
        }
    }
}

impl InjectionConfig {
    pub fn is_active(&self, t: u64) -> bool {
        self.period > 0 && t >= self.period && t % self.period < self.duration
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.period == 0 {
            return Err(ConfigError::invalid("injection.period", "must be > 0"));
        }
        if self.duration > self.period {
            return Err(ConfigError::invalid(
                "injection.duration",
                format!("{} exceeds period {}", self.duration, self.period),
            ));
        }
        if !(self.magnitude >= 0.0 && self.magnitude.is_finite()) {
            return Err(ConfigError::invalid(
                "injection.magnitude",
                format!("{} must be finite and >= 0", self.magnitude),
            ));
        }
        Ok(())
    }
}

/// Parameters of one population's simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_agents_initial: usize,
    pub resource_initial: f64,
    pub n_steps: u64,
    #[serde(rename = "sanction_damage_D")]
    pub sanction_damage: f64,
    /// The punisher pays `sanction_cost_factor * D` per sanction.
    pub sanction_cost_factor: f64,
    pub reproduction_threshold: f64,
    pub metabolism: f64,
    pub mutation_rate: f64,
    pub mutation_sd: f64,
    pub random_death_rate: f64,
    pub observation_window: usize,
    pub growth_mean: f64,
    pub growth_peak: f64,
    pub growth_trough: f64,
    pub growth_period: f64,
    pub social_maintenance: bool,
    pub d_array_window: usize,
    pub master_seed: u64,
    pub snapshot_step: u64,
    pub injection: Option<InjectionConfig>,
    pub hunger_mode: HungerMode,
    /// Keep every genome trait inside its initialisation range (mutations
    /// reflect off the bounds) and both behaviours inside `[0, 1]`. When off,
    /// only alpha and beta are clamped to `[0, 1]` and B to `>= 0`.
    pub bounded_traits: bool,
    /// Let the first agents of a round observe the tail of the previous
    /// round's order. Off means an agent only sees its predecessors in the
    /// current round.
    pub cross_round_window: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_agents_initial: 100,
            resource_initial: 1000.0,
            n_steps: 2000,
            sanction_damage: 0.6,
            sanction_cost_factor: 0.1,
            reproduction_threshold: 10.0,
            metabolism: 0.1,
            mutation_rate: 0.1,
            mutation_sd: 1.0,
            random_death_rate: 0.01,
            observation_window: 10,
            growth_mean: 10.0,
            growth_peak: 20.0,
            growth_trough: 0.0,
            growth_period: 200.0,
            social_maintenance: true,
            d_array_window: 10,
            master_seed: 0,
            snapshot_step: 1000,
            injection: None,
            hunger_mode: HungerMode::Prose,
            bounded_traits: true,
            cross_round_window: false,
        }
    }
}

fn check_probability(field: &'static str, value: f64) -> Result<(), ConfigError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, format!("{value} is not in [0, 1]")))
    }
}

fn check_non_negative(field: &'static str, value: f64) -> Result<(), ConfigError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, format!("{value} must be finite and >= 0")))
    }
}

impl SimConfig {
    /// Checks every invariant, naming the first violated bound.
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_probability("mutation_rate", self.mutation_rate)?;
        check_probability("random_death_rate", self.random_death_rate)?;
        check_non_negative("resource_initial", self.resource_initial)?;
        check_non_negative("sanction_damage_D", self.sanction_damage)?;
        check_non_negative("sanction_cost_factor", self.sanction_cost_factor)?;
        check_non_negative("reproduction_threshold", self.reproduction_threshold)?;
        check_non_negative("metabolism", self.metabolism)?;
        check_non_negative("mutation_sd", self.mutation_sd)?;
        check_non_negative("growth_mean", self.growth_mean)?;
        check_non_negative("growth_peak", self.growth_peak)?;
        check_non_negative("growth_trough", self.growth_trough)?;
        if !(self.growth_trough <= self.growth_mean && self.growth_mean <= self.growth_peak) {
            return Err(ConfigError::invalid(
                "growth_mean",
                format!(
                    "requires growth_trough <= growth_mean <= growth_peak, got {} <= {} <= {}",
                    self.growth_trough, self.growth_mean, self.growth_peak
                ),
            ));
        }
        if !(self.growth_period > 0.0 && self.growth_period.is_finite()) {
            return Err(ConfigError::invalid("growth_period", "must be finite and > 0"));
        }
        if self.snapshot_step > self.n_steps {
            return Err(ConfigError::invalid(
                "snapshot_step",
                format!("{} exceeds n_steps {}", self.snapshot_step, self.n_steps),
            ));
        }
        if let Some(injection) = &self.injection {
            injection.validate()?;
        }
        Ok(())
    }

    /// Parses a config from text. `.toml` paths are read as TOML, anything
    /// else as JSON.
    pub fn from_str_with_format(text: &str, toml_format: bool) -> Result<Self, ConfigError> {
        let config: SimConfig = if toml_format {
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        } else {
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_str_with_format(&text, is_toml(path))
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn sanction_cost(&self) -> f64 {
        self.sanction_cost_factor * self.sanction_damage
    }
}

pub(crate) fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("toml"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SimConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let config = SimConfig {
            mutation_rate: 1.5,
            ..SimConfig::default()
        };
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("mutation_rate"), "{err}");
    }

    #[test]
    fn rejects_unordered_growth() {
        let config = SimConfig {
            growth_trough: 12.0,
            ..SimConfig::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn rejects_snapshot_after_end() {
        let config = SimConfig {
            n_steps: 10,
            snapshot_step: 11,
            ..SimConfig::default()
        };
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("snapshot_step"));
    }

    #[test]
    fn rejects_long_injection() {
        let config = SimConfig {
            injection: Some(InjectionConfig {
                period: 100,
                duration: 101,
                magnitude: 1.0,
            }),
            ..SimConfig::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn partial_json_and_toml_use_defaults() {
        let json = r#"{"sanction_damage_D": 0.3, "social_maintenance": false}"#;
        let config = SimConfig::from_str_with_format(json, false).unwrap();
        assert_eq!(config.sanction_damage, 0.3);
        assert!(!config.social_maintenance);
        assert_eq!(config.n_agents_initial, 100);

        let toml_text = "n_steps = 50\nsnapshot_step = 20\nhunger_mode = \"literal\"\n\n[injection]\nmagnitude = 5.0\n";
        let config = SimConfig::from_str_with_format(toml_text, true).unwrap();
        assert_eq!(config.n_steps, 50);
        assert_eq!(config.hunger_mode, HungerMode::Literal);
        assert_eq!(config.injection.unwrap().period, 500);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = SimConfig::from_str_with_format(r#"{"n_agent": 3}"#, false).unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
    }

    #[test]
    fn injection_windows() {
        let injection = InjectionConfig::default();
        assert!(!injection.is_active(0));
        assert!(!injection.is_active(499));
        assert!(injection.is_active(500));
        assert!(injection.is_active(699));
        assert!(!injection.is_active(700));
        assert!(injection.is_active(1000));
        assert!(injection.is_active(1699));
        assert!(!injection.is_active(1700));
    }
}
