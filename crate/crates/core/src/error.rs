use thiserror::Error;

/// Errors produced by the transform, planning and simulation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size {size}: {reason}")]
    InvalidSize { size: usize, reason: &'static str },

    #[error("invalid recursion level {level}: {reason}")]
    InvalidLevel { level: u32, reason: &'static str },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: String, actual: String },

    #[error("{what} of size {size} exceeds the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("mode index {index} out of range for {n} modes")]
    ModeIndex { index: usize, n: usize },

    #[error("invalid mode pair ({i}, {j})")]
    InvalidPair { i: usize, j: usize },

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
