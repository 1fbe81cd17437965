//! Batches of independent runs per condition, the on-disk result layout, and
//! the mood-injection protocol.
//!
//! Output tree of an experiment:
//!
//! ```text
//! <out>/experiment.json            resolved configs, in plan order
//! <out>/sweep.csv                  one row per condition
//! <out>/<label>/run_00000.csv      per-step metrics
//! <out>/<label>/run_00000.json     RunResult summary with trait snapshots
//! <out>/<label>/summary.json       ExperimentSummary
//! <out>/<label>/summary.csv        per-trait mean of variance / variance of mean
//! <out>/<label>/correlations.csv   trait correlation matrix
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::analysis::{self, AnalysisOptions, ExperimentSummary, SweepRow};
use crate::config::{is_toml, InjectionConfig, SimConfig};
use crate::engine::run_simulation;
use crate::error::{ConfigError, ExperimentError};
use crate::metrics::RunResult;
use crate::world::AgentState;

/// Adds the injection to an agent's freshly updated mood when `t` falls in
/// an injection window. The sign follows the agent's own d_array weight, so
/// the injected mood reads as "gaining energy" to that agent; a zero weight
/// counts as positive.
pub fn inject_mood(agent: &mut AgentState, injection: &InjectionConfig, t: u64) {
    if injection.is_active(t) {
        let sign = if agent.genome.stimulus_weights.d_array < 0.0 { -1.0 } else { 1.0 };
        agent.mood += sign * injection.magnitude;
    }
}

/// A labelled set of config overrides. Any [`SimConfig`] key may appear next
/// to `label`; it replaces the base value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub label: String,
    #[serde(flatten)]
    pub overrides: Map<String, Value>,
}

impl Condition {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            overrides: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.overrides.insert(key.to_string(), value.into());
        self
    }
}

fn default_runs() -> u64 {
    200
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default)]
    pub base: SimConfig,
    pub conditions: Vec<Condition>,
    #[serde(default = "default_runs")]
    pub runs_per_condition: u64,
    /// Overrides `master_seed` of every condition when set.
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    /// Worker threads; all cores when unset.
    #[serde(default)]
    pub parallelism: Option<usize>,
    #[serde(default)]
    pub analysis: AnalysisOptions,
}

fn plan_error(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Plan(msg.into())
}

impl ExperimentPlan {
    pub fn new(base: SimConfig, conditions: Vec<Condition>, runs_per_condition: u64) -> Self {
        Self {
            base,
            conditions,
            runs_per_condition,
            master_seed: None,
            out_dir: default_out(),
            parallelism: None,
            analysis: AnalysisOptions::default(),
        }
    }

    /// One social-maintenance condition per damage value, labelled `D0.6` and
    /// so on; `D = 0` runs without social maintenance.
    pub fn damage_sweep(base: SimConfig, damages: &[f64], runs_per_condition: u64) -> Self {
        let conditions = damages
            .iter()
            .map(|&d| {
                Condition::new(format!("D{d}"))
                    .with("sanction_damage_D", d)
                    .with("social_maintenance", d > 0.0)
            })
            .collect();
        Self::new(base, conditions, runs_per_condition)
    }

    pub fn from_str_with_format(text: &str, toml_format: bool) -> Result<Self, ExperimentError> {
        let plan: ExperimentPlan = if toml_format {
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        } else {
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_str_with_format(&text, is_toml(path))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.runs_per_condition == 0 {
            return Err(plan_error("runs_per_condition must be >= 1"));
        }
        if self.conditions.is_empty() {
            return Err(plan_error("plan has no conditions"));
        }
        if self.parallelism == Some(0) {
            return Err(plan_error("parallelism must be >= 1"));
        }
        let mut seen = HashSet::new();
        for c in &self.conditions {
            let safe = !c.label.is_empty()
                && c.label.chars().all(|ch| ch.is_ascii_alphanumeric() || "._-".contains(ch))
                && c.label != "."
                && c.label != "..";
            if !safe {
                return Err(plan_error(format!(
                    "condition label {:?} must be non-empty and use only [A-Za-z0-9._-]",
                    c.label
                )));
            }
            if !seen.insert(c.label.as_str()) {
                return Err(plan_error(format!("duplicate condition label {:?}", c.label)));
            }
            if c.overrides.contains_key("label") {
                return Err(plan_error("label cannot be overridden"));
            }
        }
        self.resolve().map(|_| ())
    }

    /// The full config of every condition, in plan order.
    pub fn resolve(&self) -> Result<Vec<(String, SimConfig)>, ExperimentError> {
        let base = serde_json::to_value(&self.base).expect("config serialises");
        self.conditions
            .iter()
            .map(|c| {
                let mut merged = base.as_object().expect("config is an object").clone();
                for (k, v) in &c.overrides {
                    merged.insert(k.clone(), v.clone());
                }
                if let Some(seed) = self.master_seed {
                    merged.insert("master_seed".into(), seed.into());
                }
                let config: SimConfig = serde_json::from_value(Value::Object(merged))
                    .map_err(|e| ConfigError::Parse(format!("condition {:?}: {e}", c.label)))?;
                config.validate()?;
                Ok((c.label.clone(), config))
            })
            .collect()
    }
}

fn failure_reason(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "worker panicked".to_string())
}

/// Runs one seed, retrying once with the same seed if the worker fails.
pub fn run_with_retry(config: &SimConfig, condition: &str, run_seed: u64) -> Result<RunResult, ExperimentError> {
    let mut reason = String::new();
    for _ in 0..2 {
        match panic::catch_unwind(AssertUnwindSafe(|| run_simulation(config, run_seed))) {
            Ok(Ok(mut result)) => {
                result.condition = condition.to_string();
                return Ok(result);
            }
            Ok(Err(e)) => reason = e.to_string(),
            Err(payload) => reason = failure_reason(payload),
        }
    }
    Err(ExperimentError::RunFailed {
        condition: condition.to_string(),
        run_seed,
        reason,
    })
}

/// Runs seeds `0..runs` of one condition in memory. Results are in seed
/// order and keep their step series.
pub fn run_condition(config: &SimConfig, condition: &str, runs: u64) -> Result<Vec<RunResult>, ExperimentError> {
    (0..runs)
        .into_par_iter()
        .map(|seed| run_with_retry(config, condition, seed))
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::io(path, source)
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> ExperimentError + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => ExperimentError::io(path, source),
        other => ExperimentError::Malformed {
            path: path.to_path_buf(),
            reason: format!("{other:?}"),
        },
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, ExperimentError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ExperimentError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).expect("summaries serialise");
    out.write_all(b"\n").and_then(|_| out.flush()).map_err(io_err(path))
}

pub fn run_file_stem(run_seed: u64) -> String {
    format!("run_{run_seed:05}")
}

/// Writes `run_NNNNN.csv` and `run_NNNNN.json` into `dir`.
pub fn write_run_files(dir: &Path, result: &RunResult) -> Result<(PathBuf, PathBuf), ExperimentError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stem = run_file_stem(result.run_seed);
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    result.write_series_csv(create(&csv_path)?).map_err(csv_err(&csv_path))?;
    write_json(&json_path, result)?;
    Ok((csv_path, json_path))
}

pub fn read_run_json(path: &Path) -> Result<RunResult, ExperimentError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| ExperimentError::Malformed {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Resolved configs of an experiment, used to recover condition order when
/// re-analysing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub runs_per_condition: u64,
    pub analysis: AnalysisOptions,
    pub conditions: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: String,
    pub config: SimConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub summaries: Vec<ExperimentSummary>,
    pub sweep: Vec<SweepRow>,
}

impl ExperimentReport {
    pub fn from_conditions(conditions: &[(String, Vec<RunResult>)], options: &AnalysisOptions) -> Self {
        let summaries: Vec<ExperimentSummary> = conditions
            .iter()
            .map(|(label, runs)| analysis::summarize(label, runs, options))
            .collect();
        let sweep = summaries.iter().map(SweepRow::from).collect();
        Self { summaries, sweep }
    }

    /// Writes every condition's summary files and `sweep.csv` under `out`.
    pub fn write(&self, out: &Path) -> Result<(), ExperimentError> {
        for summary in &self.summaries {
            let dir = out.join(&summary.condition);
            fs::create_dir_all(&dir).map_err(io_err(&dir))?;
            write_json(&dir.join("summary.json"), summary)?;
            let path = dir.join("summary.csv");
            summary.write_trait_csv(create(&path)?).map_err(csv_err(&path))?;
            let path = dir.join("correlations.csv");
            match &summary.correlation_matrix {
                Some(m) => m.write_csv(create(&path)?).map_err(csv_err(&path))?,
                None if path.exists() => fs::remove_file(&path).map_err(io_err(&path))?,
                None => {}
            }
        }
        let path = out.join("sweep.csv");
        analysis::write_sweep_csv(&self.sweep, create(&path)?).map_err(csv_err(&path))
    }

    /// First condition without enough survivors for cross-run statistics.
    pub fn first_insufficient(&self) -> Option<&ExperimentSummary> {
        self.summaries.iter().find(|s| s.require_data().is_err())
    }
}

/// Called with (finished runs, total runs) after each run.
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

/// Runs the whole plan, writing results under `plan.out_dir` as they finish,
/// then analyses each condition. Output bytes do not depend on thread count
/// or completion order.
pub fn run_experiment(plan: &ExperimentPlan, progress: Option<Progress>) -> Result<ExperimentReport, ExperimentError> {
    let resolved = plan.resolve()?;
    let out = &plan.out_dir;
    fs::create_dir_all(out).map_err(io_err(out))?;
    write_json(
        &out.join("experiment.json"),
        &Manifest {
            runs_per_condition: plan.runs_per_condition,
            analysis: plan.analysis.clone(),
            conditions: resolved
                .iter()
                .map(|(label, config)| ManifestEntry {
                    label: label.clone(),
                    config: config.clone(),
                })
                .collect(),
        },
    )?;

    let total = resolved.len() * plan.runs_per_condition as usize;
    let done = AtomicUsize::new(0);
    let execute = || -> Result<Vec<(String, Vec<RunResult>)>, ExperimentError> {
        resolved
            .iter()
            .map(|(label, config)| {
                let dir = out.join(label);
                let runs = (0..plan.runs_per_condition)
                    .into_par_iter()
                    .map(|seed| {
                        let mut result = run_with_retry(config, label, seed)?;
                        write_run_files(&dir, &result)?;
                        result.step_series = Vec::new();
                        let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                        if let Some(report) = progress {
                            report(finished, total);
                        }
                        Ok(result)
                    })
                    .collect::<Result<Vec<_>, ExperimentError>>()?;
                Ok((label.clone(), runs))
            })
            .collect()
    };
    let conditions = match plan.parallelism {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| plan_error(format!("cannot start {n} workers: {e}")))?
            .install(execute)?,
        None => execute()?,
    };

    let report = ExperimentReport::from_conditions(&conditions, &plan.analysis);
    report.write(out)?;
    Ok(report)
}

fn run_jsons(dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("run_"))
        })
        .collect();
    paths.sort();
    Ok(paths)
}

/// Reads `experiment.json` from `dir` if there is one.
pub fn load_manifest(dir: &Path) -> Result<Option<Manifest>, ExperimentError> {
    let path = dir.join("experiment.json");
    if !path.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map(Some).map_err(|e| ExperimentError::Malformed {
        path,
        reason: e.to_string(),
    })
}

/// Loads stored run summaries grouped by condition. Uses the experiment
/// manifest for condition order when present; otherwise collects `run_*.json`
/// files from `dir` and its immediate subdirectories, ordered by label.
pub fn load_results(dir: &Path) -> Result<Vec<(String, Vec<RunResult>)>, ExperimentError> {
    if !dir.is_dir() {
        return Err(ExperimentError::NoResults(dir.to_path_buf()));
    }
    let mut groups: Vec<(String, Vec<RunResult>)> = if let Some(manifest) = load_manifest(dir)? {
        manifest
            .conditions
            .iter()
            .map(|c| {
                let runs = run_jsons(&dir.join(&c.label))?
                    .iter()
                    .map(|p| read_run_json(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((c.label.clone(), runs))
            })
            .collect::<Result<_, ExperimentError>>()?
    } else {
        let mut paths = run_jsons(dir)?;
        let mut subdirs: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io_err(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        subdirs.sort();
        for sub in subdirs {
            paths.extend(run_jsons(&sub)?);
        }
        let mut by_label: BTreeMap<String, Vec<RunResult>> = BTreeMap::new();
        for p in &paths {
            let run = read_run_json(p)?;
            by_label.entry(run.condition.clone()).or_default().push(run);
        }
        by_label.into_iter().collect()
    };
    groups.retain(|(_, runs)| !runs.is_empty());
    if groups.is_empty() {
        return Err(ExperimentError::NoResults(dir.to_path_buf()));
    }
    for (_, runs) in &mut groups {
        runs.sort_by_key(|r| r.run_seed);
    }
    Ok(groups)
}

/// Recomputes the report from stored results without re-simulating.
pub fn analyze_dir(dir: &Path, options: &AnalysisOptions) -> Result<ExperimentReport, ExperimentError> {
    Ok(ExperimentReport::from_conditions(&load_results(dir)?, options))
}

/// Mean `mu_eat` and sanctions issued over the injection steps of a run at
/// which agents were alive.
pub fn injection_window_means(run: &RunResult, injection: &InjectionConfig) -> Option<(f64, f64)> {
    let steps: Vec<_> = run
        .step_series
        .iter()
        .filter(|s| injection.is_active(s.t) && s.population > 0)
        .collect();
    if steps.is_empty() {
        return None;
    }
    let n = steps.len() as f64;
    Some((
        steps.iter().map(|s| s.mean_mu_eat).sum::<f64>() / n,
        steps.iter().map(|s| s.sanctions_issued as f64).sum::<f64>() / n,
    ))
}

/// Paired comparison of injected runs against the same seeds without
/// injection. A pair counts when the baseline run survived and the injected
/// run still had agents during some injection step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectionComparison {
    pub n_pairs: usize,
    pub baseline_mu_eat: f64,
    pub injected_mu_eat: f64,
    pub baseline_sanctions: f64,
    pub injected_sanctions: f64,
    pub mu_eat_wins: usize,
    pub mu_eat_ties: usize,
    pub sanction_wins: usize,
    pub sanction_ties: usize,
    /// One-sided sign-test p values, ties dropped.
    pub mu_eat_p: f64,
    pub sanction_p: f64,
}

/// Baseline and injected (mu_eat, sanctions) window means of one seed.
type WindowPair = ((f64, f64), (f64, f64));

pub fn compare_injection(
    baseline: &[RunResult],
    injected: &[RunResult],
    injection: &InjectionConfig,
) -> InjectionComparison {
    let pairs: Vec<WindowPair> = baseline
        .iter()
        .filter(|b| b.survived)
        .filter_map(|b| {
            let i = injected.iter().find(|i| i.run_seed == b.run_seed)?;
            Some((injection_window_means(b, injection)?, injection_window_means(i, injection)?))
        })
        .collect();
    let n = pairs.len();
    let avg = |f: &dyn Fn(&WindowPair) -> f64| {
        if n == 0 {
            0.0
        } else {
            pairs.iter().map(f).sum::<f64>() / n as f64
        }
    };
    let count = |f: &dyn Fn(&WindowPair) -> bool| pairs.iter().filter(|p| f(p)).count();
    let mu_eat_wins = count(&|(b, i)| i.0 > b.0);
    let mu_eat_ties = count(&|(b, i)| i.0 == b.0);
    let sanction_wins = count(&|(b, i)| i.1 > b.1);
    let sanction_ties = count(&|(b, i)| i.1 == b.1);
    InjectionComparison {
        n_pairs: n,
        baseline_mu_eat: avg(&|(b, _)| b.0),
        injected_mu_eat: avg(&|(_, i)| i.0),
        baseline_sanctions: avg(&|(b, _)| b.1),
        injected_sanctions: avg(&|(_, i)| i.1),
        mu_eat_wins,
        mu_eat_ties,
        sanction_wins,
        sanction_ties,
        mu_eat_p: analysis::sign_test_p(mu_eat_wins, n - mu_eat_ties),
        sanction_p: analysis::sign_test_p(sanction_wins, n - sanction_ties),
    }
}
