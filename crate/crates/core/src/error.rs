use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value {value} at grid index {index}")]
    NonFinite { index: isize, value: f64 },

    #[error("non-finite entry {value} in stencil window at position {position}")]
    NonFiniteWindow { position: usize, value: f64 },

    #[error("non-positive density {rho} at cell {index}")]
    NonPositiveDensity { index: isize, rho: f64 },

    #[error("non-positive pressure {pressure} at cell {index}")]
    NonPositivePressure { index: isize, pressure: f64 },

    #[error("inadmissible state (rho = {rho}, p = {pressure}) at cell ({i}, {j})")]
    Inadmissible2D { i: isize, j: isize, rho: f64, pressure: f64 },

    #[error("inadmissible interface average: {0}")]
    InadmissibleAverage(String),

    #[error("stage {stage} failed at t = {time}: {source}")]
    Stage {
        stage: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("run aborted after {steps} steps at t = {time}: {source}")]
    Aborted {
        time: f64,
        steps: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown problem `{name}`; available: {}", available.join(", "))]
    UnknownProblem { name: String, available: Vec<&'static str> },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for failures caused by the solution leaving the admissible set
    /// (as opposed to bad input or I/O).
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::NonFinite { .. }
            | Error::NonPositiveDensity { .. }
            | Error::NonPositivePressure { .. }
            | Error::Inadmissible2D { .. }
            | Error::InadmissibleAverage(_) => true,
            Error::Stage { source, .. } | Error::Aborted { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }

    pub(crate) fn at_stage(self, stage: usize, time: f64) -> Self {
        Error::Stage { stage, time, source: Box::new(self) }
    }
}
