use thiserror::Error;

/// Errors raised by the combinatorial core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid traversal: {0}")]
    InvalidTraversal(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid class spec: {0}")]
    InvalidClassSpec(String),

    #[error("{what} = {value} exceeds the configured bound {bound}")]
    BoundExceeded { what: &'static str, value: usize, bound: usize },

    #[error("tableau shapes differ: {0}")]
    ShapeMismatch(String),

    #[error("growth reconstruction failed: {0}")]
    ReconstructionFailure(String),

    #[error("extracted points do not form a traversal: {0}")]
    NotATraversal(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("inner bijection failure: {0}")]
    InnerBijectionFailure(String),

    #[error("layer overflow: permutation has {layers} layers but d = {d}")]
    LayerOverflow { layers: usize, d: usize },

    #[error("invalid rectangle: {0}")]
    InvalidRect(String),

    #[error("invalid delta {0}: must lie in (0, 0.5)")]
    InvalidDelta(f64),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
