use thiserror::Error;

use crate::textio::Diagnostics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An expression mixed `+inf` and `-inf` contributions.
    #[error("ill-formed evaluation: {0}")]
    IllFormedEvaluation(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("region dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The region-automaton oracle refuses models whose constants exceed its cap.
    #[error("constant {constant} exceeds the brute-force cap {cap}")]
    CapExceeded { constant: i64, cap: i64 },

    /// No exact synthesis procedure applies to the model and property.
    #[error("no decidable synthesis mode applies: {0}")]
    Undecidable(String),

    #[error("no witness run exists")]
    NoWitness,

    #[error("run replay failed: {0}")]
    Replay(String),

    #[error(transparent)]
    Parse(#[from] Diagnostics),
}
