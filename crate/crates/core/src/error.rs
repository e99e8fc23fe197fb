//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid subshift system: {0}")]
    InvalidSystem(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    /// Separation at scales ε ≤ 1/2 no longer aligns with cylinder
    /// structure; the cylinder-aligned constructor refuses them.
    #[error("epsilon {epsilon} <= 1/2: use greedy_separated_set for fine scales")]
    FineScaleEpsilon { epsilon: f64 },

    #[error("epsilon {epsilon} outside (0, 1]")]
    EpsilonOutOfRange { epsilon: f64 },

    #[error("empty separated set")]
    EmptySeparatedSet,

    #[error("no periodic points of period {n}")]
    NoPeriodicPoints { n: usize },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("cannot take a depth-{requested} view of a depth-{available} measure")]
    BadMarginalDepth { requested: usize, available: usize },

    #[error("invariance defect {defect:e} exceeds {limit:e}: not an invariant Markov marginal")]
    NotInvariantMarginal { defect: f64, limit: f64 },

    #[error("{what} did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        residual: f64,
        iterations: usize,
    },

    #[error("internal consistency violation in {what}: {detail}")]
    InternalConsistency { what: &'static str, detail: String },

    #[error("occupation window has zero duration")]
    ZeroDuration,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of an iterative numeric routine (as opposed to
    /// invalid inputs); the CLI maps these to a dedicated exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::InternalConsistency { .. }
        )
    }
}
