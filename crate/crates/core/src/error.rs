use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("need at least {needed} walkers, got {got}")]
    TooFewWalkers { needed: usize, got: usize },

    #[error("trajectory has only sparse checkpoints; a full step record is required")]
    SparseTrajectory,

    #[error("trajectory is not one-dimensional (d = {0})")]
    NotOneDimensional(usize),

    #[error("breadth-first search exceeded radius cap {cap}")]
    RadiusCapExceeded { cap: u64 },

    #[error("step budget exceeded: requested {requested}, limit {limit}")]
    BudgetExceeded { requested: u64, limit: u64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series criterion degenerate: exponent p = {0} is not positive")]
    DegenerateCriterion(i64),

    #[error("statistical test: {0}")]
    StatTest(String),

    #[error("golden file parse error at line {line}: {msg}")]
    GoldenParse { line: usize, msg: String },

    #[error("config error(s): {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::domain(msg)
}
