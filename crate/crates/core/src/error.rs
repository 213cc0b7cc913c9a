use thiserror::Error;

use crate::moves::Move;
use crate::scheme::{Position, Sign};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {0} lies outside the triangle of dimension {1}")]
    Index(Position, usize),

    #[error("invalid index pattern: {0}")]
    IndexPattern(String),

    #[error("{mv} cannot be applied: expected '{expected}' at {position}, found '{found}'")]
    InvalidMove {
        mv: Move,
        position: Position,
        expected: Sign,
        found: Sign,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("normalization invariant broken: {0}")]
    AlgorithmInvariant(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
