use thiserror::Error;

/// Errors for precondition violations and parsing failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ordered pair ({i}, {j}) for dimension {n}")]
    InvalidPair { i: usize, j: usize, n: usize },
    #[error("dimension {n} is too small (need n >= 2)")]
    DimensionTooSmall { n: usize },
    #[error("split point {m} out of range for dimension {n} (need 1 <= m <= n-1)")]
    SplitOutOfRange { m: usize, n: usize },
    #[error("state index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("distribution index sets do not match")]
    SpaceMismatch,
    #[error("coupled chains must start with equal Hamming weight ({0} vs {1})")]
    WeightMismatch(usize, usize),
    #[error("bit vector length mismatch (expected {expected}, got {got})")]
    LengthMismatch { expected: usize, got: usize },
    #[error("inconsistent block counts for gap-move probabilities")]
    InconsistentCounts,
    #[error("the all-zeros state is outside the chain's state space")]
    ZeroState,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
