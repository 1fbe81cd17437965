//! Command-line front end: `run`, `experiment` and `analyze`.
//!
//! Exit codes: 0 success, 1 a run failed twice, 2 bad config, plan or input
//! directory, 3 I/O failure, 4 too few surviving runs to analyse.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::analysis::AnalysisOptions;
use crate::config::{HungerMode, SimConfig};
use crate::engine::run_simulation;
use crate::error::ExperimentError;
use crate::experiments::{self, ExperimentPlan, ExperimentReport};

#[derive(Debug, Parser)]
#[command(name = "affectsim", version, about = "Evolving populations with mood and peer sanctions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one population and write its series CSV and JSON summary.
    Run(RunArgs),
    /// Run every condition of a plan and analyse the results.
    Experiment(ExperimentArgs),
    /// Recompute summaries from stored run results.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON or TOML config; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub snapshot_step: Option<u64>,
    #[arg(long)]
    pub hunger_mode: Option<HungerMode>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub plan: PathBuf,
    /// Runs per condition, overriding the plan.
    #[arg(long)]
    pub runs: Option<u64>,
    /// Master seed, overriding the plan.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the plan's value, else all cores.
    #[arg(long)]
    pub parallel: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub snapshot_step: Option<u64>,
    #[arg(long)]
    pub hunger_mode: Option<HungerMode>,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Experiment output directory, or a directory of run JSON files.
    pub dir: PathBuf,
    /// Where to write the summaries; defaults to `dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Snapshot to analyse; defaults to each run's earliest.
    #[arg(long)]
    pub snapshot_step: Option<u64>,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    /// Population-size variance at or below which a run counts as regulated.
    #[arg(long)]
    pub regulation_variance: Option<f64>,
}

impl ThresholdArgs {
    fn apply(&self, options: &mut AnalysisOptions) -> Result<(), ExperimentError> {
        if let Some(c1) = self.c1 {
            options.thresholds.c1 = c1;
        }
        if let Some(c2) = self.c2 {
            options.thresholds.c2 = c2;
        }
        if let Some(v) = self.regulation_variance {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ExperimentError::Plan("--regulation-variance must be > 0".into()));
            }
            options.regulation_variance = v;
        }
        Ok(())
    }
}

impl clap::ValueEnum for HungerMode {
    fn value_variants<'a>() -> &'a [Self] {
        &[HungerMode::Prose, HungerMode::Literal]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            HungerMode::Prose => "prose",
            HungerMode::Literal => "literal",
        }))
    }
}

pub fn exit_code(err: &ExperimentError) -> u8 {
    match err {
        ExperimentError::Config(_)
        | ExperimentError::Plan(_)
        | ExperimentError::NoResults(_)
        | ExperimentError::Malformed { .. } => 2,
        ExperimentError::Io { .. } => 3,
        ExperimentError::Analysis(_) => 4,
        ExperimentError::RunFailed { .. } => 1,
    }
}

fn cmd_run(args: RunArgs) -> Result<(), ExperimentError> {
    let RunArgs {
        config,
        seed,
        out,
        snapshot_step,
        hunger_mode,
    } = args;
    let mut config = match config {
        Some(path) => SimConfig::load(&path)?,
        None => SimConfig::default(),
    };
    if let Some(t) = snapshot_step {
        config.snapshot_step = t;
    }
    if let Some(mode) = hunger_mode {
        config.hunger_mode = mode;
    }
    config.validate()?;
    let result = run_simulation(&config, seed)?;
    let (csv, json) = experiments::write_run_files(&out, &result)?;
    eprintln!(
        "run {seed}: {} after {} steps, final population {}",
        if result.survived { "survived" } else { "extinct" },
        config.n_steps,
        result.step_series.last().map_or(0, |s| s.population)
    );
    println!("{}\n{}", csv.display(), json.display());
    Ok(())
}

fn print_report(report: &ExperimentReport) {
    for s in &report.summaries {
        let fmt = |r: Option<f64>| r.map_or("-".to_string(), |r| format!("{r:.3}"));
        println!(
            "{:<16} survived {:>4}/{:<4} r(d_array,eat_mu)={} r(sanction_mu,d_array)={} r(hunger,d_array)={}",
            s.condition,
            s.n_survived,
            s.n_runs,
            fmt(s.focal.d_array_vs_eat_mu),
            fmt(s.focal.sanction_mu_vs_d_array),
            fmt(s.focal.hunger_vs_d_array),
        );
    }
}

fn warn_insufficient(report: &ExperimentReport) -> Result<(), ExperimentError> {
    match report.first_insufficient() {
        Some(s) => Err(s.require_data().unwrap_err().into()),
        None => Ok(()),
    }
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), ExperimentError> {
    let ExperimentArgs {
        plan: plan_path,
        runs,
        seed,
        parallel,
        out,
        snapshot_step,
        hunger_mode,
        thresholds,
    } = args;
    let mut plan = ExperimentPlan::load(&plan_path)?;
    if let Some(n) = runs {
        plan.runs_per_condition = n;
    }
    if let Some(seed) = seed {
        plan.master_seed = Some(seed);
    }
    if let Some(p) = parallel {
        plan.parallelism = Some(p);
    }
    if let Some(out) = out {
        plan.out_dir = out;
    }
    for condition in &mut plan.conditions {
        if let Some(t) = snapshot_step {
            condition.overrides.insert("snapshot_step".into(), t.into());
        }
        if let Some(mode) = hunger_mode {
            let value = serde_json::to_value(mode).expect("mode serialises");
            condition.overrides.insert("hunger_mode".into(), value);
        }
    }
    thresholds.apply(&mut plan.analysis)?;
    plan.validate()?;

    let progress = |done: usize, total: usize| {
        let step = (total / 100).max(1);
        if done.is_multiple_of(step) || done == total {
            eprintln!("progress: {done}/{total} runs");
        }
    };
    let report = experiments::run_experiment(&plan, Some(&progress))?;
    print_report(&report);
    if let Err(e) = warn_insufficient(&report) {
        eprintln!("warning: {e}");
    }
    eprintln!("results written to {}", plan.out_dir.display());
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), ExperimentError> {
    let AnalyzeArgs {
        dir,
        out,
        snapshot_step,
        thresholds,
    } = args;
    let mut options = experiments::load_manifest(&dir)?
        .map(|m| m.analysis)
        .unwrap_or_default();
    if snapshot_step.is_some() {
        options.snapshot_step = snapshot_step;
    }
    thresholds.apply(&mut options)?;
    let report = experiments::analyze_dir(&dir, &options)?;
    let out = out.unwrap_or(dir);
    std::fs::create_dir_all(&out).map_err(|e| ExperimentError::io(&out, e))?;
    report.write(&out)?;
    print_report(&report);
    warn_insufficient(&report)
}

/// Parses `args` and runs the command, reporting errors on stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Analyze(args) => cmd_analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
