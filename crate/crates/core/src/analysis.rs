//! Cross-run statistics over the trait snapshots of surviving populations.
//!
//! Everything here is a pure function of stored [`RunResult`]s, so an
//! experiment can be re-analysed with different thresholds without
//! re-simulating.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::genome::TraitId;
use crate::metrics::{mean_and_variance, RunResult, TraitSnapshot};

/// Verdict of the two-criterion norm flowchart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormClass {
    #[serde(rename = "no-regularity")]
    NoRegularity,
    /// Converged within populations but the same across them.
    #[serde(rename = "scaffolding/indirect")]
    Scaffolding,
    #[serde(rename = "norm")]
    Norm,
    /// A weight that belongs to the mechanism producing a normative behaviour.
    #[serde(rename = "norm (mechanistic member)")]
    MechanisticMember,
}

impl NormClass {
    pub fn label(self) -> &'static str {
        match self {
            NormClass::NoRegularity => "no-regularity",
            NormClass::Scaffolding => "scaffolding/indirect",
            NormClass::Norm => "norm",
            NormClass::MechanisticMember => "norm (mechanistic member)",
        }
    }
}

/// Cut-offs of the classification, as multiples of the trait's
/// initialisation variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Converged when mean of variance < `c1 * baseline`.
    pub c1: f64,
    /// Arbitrary when variance of mean > `c2 * baseline`.
    pub c2: f64,
    /// Minimum |r| to the governing weight for a mechanistic member.
    pub mechanistic_r: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 0.1,
            mechanistic_r: 0.3,
        }
    }
}

/// A behaviour that is directly maintained, and the weight through which
/// mood drives it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanisticRule {
    pub behaviour: TraitId,
    pub governing_weight: TraitId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisOptions {
    pub thresholds: Thresholds,
    pub regulation_variance: f64,
    /// Snapshot time to analyse. `None` picks each run's earliest snapshot,
    /// which is the configured `snapshot_step`.
    pub snapshot_step: Option<u64>,
    pub mechanistic_rules: Vec<MechanisticRule>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            thresholds: Thresholds::default(),
            regulation_variance: 70.0,
            snapshot_step: None,
            mechanistic_rules: vec![MechanisticRule {
                behaviour: TraitId::MuEat,
                governing_weight: TraitId::EatMuWeight,
            }],
        }
    }
}

fn require(needed: usize, available: usize) -> Result<(), AnalysisError> {
    if available < needed {
        Err(AnalysisError::InsufficientData { needed, available })
    } else {
        Ok(())
    }
}

fn trait_values<'a>(
    snapshots: &'a [&TraitSnapshot],
    id: TraitId,
) -> impl Iterator<Item = crate::metrics::TraitStats> + 'a {
    snapshots.iter().filter_map(move |s| s.get(id))
}

/// Mean over runs of the within-run population variance of `id`.
pub fn mean_of_variance(snapshots: &[&TraitSnapshot], id: TraitId) -> Result<f64, AnalysisError> {
    let variances: Vec<f64> = trait_values(snapshots, id).map(|s| s.variance).collect();
    require(2, variances.len())?;
    Ok(variances.iter().sum::<f64>() / variances.len() as f64)
}

/// Population variance across runs of the within-run mean of `id`.
pub fn variance_of_mean(snapshots: &[&TraitSnapshot], id: TraitId) -> Result<f64, AnalysisError> {
    let means: Vec<f64> = trait_values(snapshots, id).map(|s| s.mean).collect();
    require(2, means.len())?;
    Ok(mean_and_variance(&means).expect("non-empty").1)
}

/// Single-variable verdict. Mechanistic membership is assigned afterwards
/// from the correlation matrix, see [`summarize`].
pub fn classify_norm(mov: f64, vom: f64, baseline_variance: f64, thresholds: &Thresholds) -> NormClass {
    let converged = mov < thresholds.c1 * baseline_variance;
    let arbitrary = vom > thresholds.c2 * baseline_variance;
    match (converged, arbitrary) {
        (true, true) => NormClass::Norm,
        (true, false) => NormClass::Scaffolding,
        _ => NormClass::NoRegularity,
    }
}

/// Pearson correlation, `None` when either column is constant or there are
/// fewer than three points.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "columns of unequal length");
    if x.len() < 3 {
        return None;
    }
    let (mx, vx) = mean_and_variance(x)?;
    let (my, vy) = mean_and_variance(y)?;
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    let n = x.len() as f64;
    let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
    Some((cov / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub traits: Vec<TraitId>,
    /// Row-major; `None` where a column has zero variance.
    pub values: Vec<Vec<Option<f64>>>,
    pub degenerate: Vec<TraitId>,
    pub n_runs: usize,
}

impl CorrelationMatrix {
    fn index(&self, id: TraitId) -> Option<usize> {
        self.traits.iter().position(|&t| t == id)
    }

    pub fn get(&self, a: TraitId, b: TraitId) -> Option<f64> {
        self.values[self.index(a)?][self.index(b)?]
    }

    /// Header row of trait names, then one row per trait.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec!["trait".to_string()];
        header.extend(self.traits.iter().map(|t| t.name().to_string()));
        out.write_record(&header)?;
        for (id, row) in self.traits.iter().zip(&self.values) {
            let mut record = vec![id.name().to_string()];
            record.extend(row.iter().map(|v| v.map(|r| r.to_string()).unwrap_or_default()));
            out.write_record(&record)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Pearson matrix over the columns of `rows` (one row per run).
pub fn correlation_matrix(traits: &[TraitId], rows: &[Vec<f64>]) -> Result<CorrelationMatrix, AnalysisError> {
    require(3, rows.len())?;
    let columns: Vec<Vec<f64>> = (0..traits.len())
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let degenerate_col: Vec<bool> = columns
        .iter()
        .map(|c| mean_and_variance(c).is_none_or(|(_, v)| v == 0.0))
        .collect();
    let k = traits.len();
    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        if degenerate_col[i] {
            continue;
        }
        values[i][i] = Some(1.0);
        for j in (i + 1)..k {
            if degenerate_col[j] {
                continue;
            }
            let r = pearson(&columns[i], &columns[j]);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        traits: traits.to_vec(),
        values,
        degenerate: traits
            .iter()
            .zip(&degenerate_col)
            .filter(|(_, &d)| d)
            .map(|(&t, _)| t)
            .collect(),
        n_runs: rows.len(),
    })
}

/// The snapshot analysed for `run`: the one at `t`, or the earliest.
pub fn analysis_snapshot(run: &RunResult, t: Option<u64>) -> Option<&TraitSnapshot> {
    match t {
        Some(t) => run.snapshot_at(t),
        None => run.snapshots.iter().min_by_key(|s| s.t),
    }
}

/// Surviving runs paired with their non-empty analysis snapshot.
pub fn surviving(runs: &[RunResult], t: Option<u64>) -> Vec<(&RunResult, &TraitSnapshot)> {
    runs.iter()
        .filter(|r| r.survived)
        .filter_map(|r| analysis_snapshot(r, t).filter(|s| !s.is_empty()).map(|s| (r, s)))
        .collect()
}

/// Traits reported by every snapshot, in canonical order.
fn common_traits(snapshots: &[&TraitSnapshot]) -> Vec<TraitId> {
    TraitId::ALL
        .into_iter()
        .filter(|&id| !snapshots.is_empty() && snapshots.iter().all(|s| s.get(id).is_some()))
        .collect()
}

fn mean_rows(snapshots: &[&TraitSnapshot], traits: &[TraitId]) -> Vec<Vec<f64>> {
    snapshots
        .iter()
        .map(|s| traits.iter().map(|&id| s.get(id).expect("common trait").mean).collect())
        .collect()
}

fn focal_pair(snapshots: &[&TraitSnapshot], a: TraitId, b: TraitId) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = snapshots
        .iter()
        .filter_map(|s| Some((s.get(a)?.mean, s.get(b)?.mean)))
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    if x.len() < 3 {
        return None;
    }
    pearson(&x, &y)
}

/// Correlations tracked across the damage sweep.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FocalCorrelations {
    pub d_array_vs_eat_mu: Option<f64>,
    pub sanction_mu_vs_d_array: Option<f64>,
    pub hunger_vs_d_array: Option<f64>,
}

impl FocalCorrelations {
    pub fn of(snapshots: &[&TraitSnapshot]) -> Self {
        Self {
            d_array_vs_eat_mu: focal_pair(snapshots, TraitId::DArrayWeight, TraitId::EatMuWeight),
            sanction_mu_vs_d_array: focal_pair(snapshots, TraitId::SanctionMuWeight, TraitId::DArrayWeight),
            hunger_vs_d_array: focal_pair(snapshots, TraitId::HungerWeight, TraitId::DArrayWeight),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub n_runs: usize,
    pub mean_energy_drain: f64,
    pub mean_population: f64,
    pub mean_sanction_damage: f64,
    pub d_array_vs_eat_mu: Option<f64>,
    pub sanction_mu_vs_d_array: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegulationSplit {
    pub variance_threshold: f64,
    pub regulated_runs: Vec<u64>,
    pub unregulated_runs: Vec<u64>,
    /// `None` for an empty group.
    pub regulated: Option<GroupStats>,
    pub unregulated: Option<GroupStats>,
}

fn group_stats(group: &[(&RunResult, &TraitSnapshot)]) -> Option<GroupStats> {
    if group.is_empty() {
        return None;
    }
    let n = group.len() as f64;
    let avg = |f: fn(&RunResult) -> f64| group.iter().map(|(r, _)| f(r)).sum::<f64>() / n;
    let snaps: Vec<&TraitSnapshot> = group.iter().map(|(_, s)| *s).collect();
    let focal = FocalCorrelations::of(&snaps);
    Some(GroupStats {
        n_runs: group.len(),
        mean_energy_drain: avg(|r| r.mean_energy_drain),
        mean_population: avg(|r| r.mean_population),
        mean_sanction_damage: avg(|r| r.mean_sanction_damage),
        d_array_vs_eat_mu: focal.d_array_vs_eat_mu,
        sanction_mu_vs_d_array: focal.sanction_mu_vs_d_array,
    })
}

/// Splits surviving runs by whether their population-size variance is at
/// most `variance_threshold`.
pub fn regulation_split(runs: &[RunResult], variance_threshold: f64, t: Option<u64>) -> RegulationSplit {
    assert!(variance_threshold > 0.0, "variance threshold must be positive");
    let (regulated, unregulated): (Vec<_>, Vec<_>) = surviving(runs, t)
        .into_iter()
        .partition(|(r, _)| r.population_variance <= variance_threshold);
    RegulationSplit {
        variance_threshold,
        regulated_runs: regulated.iter().map(|(r, _)| r.run_seed).collect(),
        unregulated_runs: unregulated.iter().map(|(r, _)| r.run_seed).collect(),
        regulated: group_stats(&regulated),
        unregulated: group_stats(&unregulated),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitSummary {
    #[serde(rename = "trait")]
    pub trait_id: TraitId,
    pub mean_of_variance: Option<f64>,
    pub variance_of_mean: Option<f64>,
    pub baseline_variance: f64,
    pub classification: Option<NormClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub condition: String,
    pub social_maintenance: bool,
    #[serde(rename = "sanction_damage_D")]
    pub sanction_damage: f64,
    pub n_runs: usize,
    pub n_survived: usize,
    pub survival_rate: f64,
    /// Snapshot time the statistics were taken at.
    pub snapshot_step: Option<u64>,
    pub thresholds: Thresholds,
    pub traits: Vec<TraitSummary>,
    pub focal: FocalCorrelations,
    pub correlation_matrix: Option<CorrelationMatrix>,
    pub regulation: RegulationSplit,
}

impl ExperimentSummary {
    pub fn get(&self, id: TraitId) -> Option<&TraitSummary> {
        self.traits.iter().find(|t| t.trait_id == id)
    }

    /// Errors unless there were enough survivors for the cross-run statistics.
    pub fn require_data(&self) -> Result<(), AnalysisError> {
        require(2, self.n_survived)
    }

    /// One row per trait: the mean-of-variance / variance-of-mean table.
    pub fn write_trait_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            #[serde(rename = "trait")]
            trait_id: &'a str,
            mean_of_variance: Option<f64>,
            variance_of_mean: Option<f64>,
            baseline_variance: f64,
            classification: &'a str,
        }
        let mut out = csv::Writer::from_writer(writer);
        for t in &self.traits {
            out.serialize(Row {
                trait_id: t.trait_id.name(),
                mean_of_variance: t.mean_of_variance,
                variance_of_mean: t.variance_of_mean,
                baseline_variance: t.baseline_variance,
                classification: t.classification.map(NormClass::label).unwrap_or(""),
            })?;
        }
        if self.traits.is_empty() {
            out.write_record(["trait", "mean_of_variance", "variance_of_mean", "baseline_variance", "classification"])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Cross-run statistics for one condition. Never fails: statistics that need
/// more surviving runs than are available are left empty; see
/// [`ExperimentSummary::require_data`].
pub fn summarize(condition: &str, runs: &[RunResult], options: &AnalysisOptions) -> ExperimentSummary {
    let survivors = surviving(runs, options.snapshot_step);
    let snaps: Vec<&TraitSnapshot> = survivors.iter().map(|(_, s)| *s).collect();
    let traits = common_traits(&snaps);
    let correlation = correlation_matrix(&traits, &mean_rows(&snaps, &traits)).ok();

    let mut summaries: Vec<TraitSummary> = traits
        .iter()
        .map(|&id| {
            let mov = mean_of_variance(&snaps, id).ok();
            let vom = variance_of_mean(&snaps, id).ok();
            let baseline = id.baseline_variance();
            TraitSummary {
                trait_id: id,
                mean_of_variance: mov,
                variance_of_mean: vom,
                baseline_variance: baseline,
                classification: mov
                    .zip(vom)
                    .map(|(m, v)| classify_norm(m, v, baseline, &options.thresholds)),
            }
        })
        .collect();

    let social_maintenance = runs.first().is_some_and(|r| r.social_maintenance);
    if social_maintenance {
        if let Some(matrix) = &correlation {
            apply_mechanistic_rules(&mut summaries, matrix, options);
        }
    }

    ExperimentSummary {
        condition: condition.to_string(),
        social_maintenance,
        sanction_damage: runs.first().map_or(0.0, |r| r.sanction_damage),
        n_runs: runs.len(),
        n_survived: runs.iter().filter(|r| r.survived).count(),
        survival_rate: if runs.is_empty() {
            0.0
        } else {
            runs.iter().filter(|r| r.survived).count() as f64 / runs.len() as f64
        },
        snapshot_step: snaps.first().map(|s| s.t),
        thresholds: options.thresholds,
        traits: summaries,
        focal: FocalCorrelations::of(&snaps),
        correlation_matrix: correlation,
        regulation: regulation_split(runs, options.regulation_variance, options.snapshot_step),
    }
}

fn apply_mechanistic_rules(summaries: &mut [TraitSummary], matrix: &CorrelationMatrix, options: &AnalysisOptions) {
    for rule in &options.mechanistic_rules {
        let behaviour_is_norm = summaries
            .iter()
            .any(|s| s.trait_id == rule.behaviour && s.classification == Some(NormClass::Norm));
        if !behaviour_is_norm {
            continue;
        }
        for s in summaries.iter_mut() {
            if !s.trait_id.is_weight() {
                continue;
            }
            let member = s.trait_id == rule.governing_weight
                || matrix
                    .get(s.trait_id, rule.governing_weight)
                    .is_some_and(|r| r.abs() >= options.thresholds.mechanistic_r);
            if member {
                s.classification = Some(NormClass::MechanisticMember);
            }
        }
    }
}

/// One row of the damage sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub condition: String,
    pub social_maintenance: bool,
    #[serde(rename = "sanction_damage_D")]
    pub sanction_damage: f64,
    pub n_runs: usize,
    pub n_survived: usize,
    pub survival_rate: f64,
    pub r_d_array_eat_mu: Option<f64>,
    pub r_sanction_mu_d_array: Option<f64>,
    pub r_hunger_d_array: Option<f64>,
    pub eat_mu_weight_mean_of_variance: Option<f64>,
    pub eat_mu_weight_variance_of_mean: Option<f64>,
}

impl From<&ExperimentSummary> for SweepRow {
    fn from(s: &ExperimentSummary) -> Self {
        let eat = s.get(TraitId::EatMuWeight);
        SweepRow {
            condition: s.condition.clone(),
            social_maintenance: s.social_maintenance,
            sanction_damage: s.sanction_damage,
            n_runs: s.n_runs,
            n_survived: s.n_survived,
            survival_rate: s.survival_rate,
            r_d_array_eat_mu: s.focal.d_array_vs_eat_mu,
            r_sanction_mu_d_array: s.focal.sanction_mu_vs_d_array,
            r_hunger_d_array: s.focal.hunger_vs_d_array,
            eat_mu_weight_mean_of_variance: eat.and_then(|t| t.mean_of_variance),
            eat_mu_weight_variance_of_mean: eat.and_then(|t| t.variance_of_mean),
        }
    }
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "condition",
    "social_maintenance",
    "sanction_damage_D",
    "n_runs",
    "n_survived",
    "survival_rate",
    "r_d_array_eat_mu",
    "r_sanction_mu_d_array",
    "r_hunger_d_array",
    "eat_mu_weight_mean_of_variance",
    "eat_mu_weight_variance_of_mean",
];

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        out.write_record(SWEEP_COLUMNS)?;
    }
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

/// P(X >= wins) for X ~ Binomial(n, 1/2).
pub fn sign_test_p(wins: usize, n: usize) -> f64 {
    assert!(wins <= n);
    // ln C(n, k) accumulated term by term keeps large n finite.
    let ln_half_n = n as f64 * 0.5f64.ln();
    let mut ln_choose = 0.0;
    let mut p = 0.0;
    for k in 0..=n {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        if k >= wins {
            p += (ln_choose + ln_half_n).exp();
        }
    }
    p.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::TraitStats;
    use std::collections::BTreeMap;

    fn snap(values: &[(TraitId, f64, f64)]) -> TraitSnapshot {
        TraitSnapshot {
            t: 1000,
            population: 10,
            traits: values
                .iter()
                .map(|&(id, mean, variance)| (id, TraitStats { mean, variance }))
                .collect::<BTreeMap<_, _>>(),
        }
    }

    #[test]
    fn mov_and_vom_examples() {
        let a = snap(&[(TraitId::MuEat, 0.3, 0.02)]);
        let b = snap(&[(TraitId::MuEat, 0.3, 0.06)]);
        let snaps = [&a, &b];
        assert!((mean_of_variance(&snaps, TraitId::MuEat).unwrap() - 0.04).abs() < 1e-15);
        assert_eq!(variance_of_mean(&snaps, TraitId::MuEat).unwrap(), 0.0);

        let c = snap(&[(TraitId::MuEat, 0.1, 0.0)]);
        let d = snap(&[(TraitId::MuEat, 0.5, 0.0)]);
        let snaps = [&c, &d];
        assert_eq!(mean_of_variance(&snaps, TraitId::MuEat).unwrap(), 0.0);
        assert!((variance_of_mean(&snaps, TraitId::MuEat).unwrap() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn one_run_is_insufficient() {
        let a = snap(&[(TraitId::MuEat, 0.3, 0.02)]);
        assert_eq!(
            mean_of_variance(&[&a], TraitId::MuEat),
            Err(AnalysisError::InsufficientData { needed: 2, available: 1 })
        );
        assert!(variance_of_mean(&[], TraitId::MuEat).is_err());
    }

    #[test]
    fn classification_flowchart() {
        let th = Thresholds::default();
        let base = 1.0 / 12.0;
        assert_eq!(classify_norm(0.0, 0.0, base, &th), NormClass::Scaffolding);
        assert_eq!(classify_norm(0.005, 0.002, base, &th), NormClass::Scaffolding);
        assert_eq!(classify_norm(0.076, 0.038, base, &th), NormClass::Norm);
        assert_eq!(classify_norm(0.5, 0.5, base, &th), NormClass::NoRegularity);
        assert_eq!(classify_norm(0.5, 0.0, base, &th), NormClass::NoRegularity);
    }

    #[test]
    fn pearson_basics() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let y = [8.0, 6.0, 4.0, 2.0];
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&x, &[1.0; 4]), None);
        assert_eq!(pearson(&x[..2], &y[..2]), None);
    }

    #[test]
    fn degenerate_columns_are_undefined() {
        let traits = [TraitId::Alpha, TraitId::Beta, TraitId::BiteSize];
        let rows = vec![vec![0.1, 0.5, 0.2], vec![0.2, 0.5, 0.1], vec![0.4, 0.5, 0.3]];
        let m = correlation_matrix(&traits, &rows).unwrap();
        assert_eq!(m.degenerate, vec![TraitId::Beta]);
        assert_eq!(m.get(TraitId::Beta, TraitId::Beta), None);
        assert_eq!(m.get(TraitId::Alpha, TraitId::Beta), None);
        assert_eq!(m.get(TraitId::Alpha, TraitId::Alpha), Some(1.0));
        assert!(correlation_matrix(&traits, &rows[..2]).is_err());
    }

    #[test]
    fn sign_test_values() {
        assert!((sign_test_p(0, 10) - 1.0).abs() < 1e-12);
        assert!((sign_test_p(10, 10) - 1.0 / 1024.0).abs() < 1e-15);
        assert!((sign_test_p(9, 10) - 11.0 / 1024.0).abs() < 1e-15);
        assert!(sign_test_p(60, 100) < 0.05 && sign_test_p(58, 100) > 0.05);
        assert!(sign_test_p(5000, 10000).is_finite());
    }

    #[test]
    fn serde_labels() {
        let json = serde_json::to_string(&NormClass::Scaffolding).unwrap();
        assert_eq!(json, "\"scaffolding/indirect\"");
        let back: NormClass = serde_json::from_str("\"norm (mechanistic member)\"").unwrap();
        assert_eq!(back, NormClass::MechanisticMember);
    }
}
