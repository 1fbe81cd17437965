use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("cannot read configuration {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl ConfigError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("insufficient data: need at least {needed} surviving runs, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error("unknown trait {0:?}")]
    UnknownTrait(String),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("plan error: {0}")]
    Plan(String),
    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("no run results found under {0}")]
    NoResults(PathBuf),
    #[error("malformed result file {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("run {run_seed} of condition {condition:?} failed twice: {reason}")]
    RunFailed {
        condition: String,
        run_seed: u64,
        reason: String,
    },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl ExperimentError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        ExperimentError::Io {
            path: path.into(),
            source,
        }
    }
}
