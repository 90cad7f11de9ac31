use thiserror::Error;

use crate::example::Cell;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TeachError {
    #[error("cell ({x}, {y}) lies outside the {n}x{n} domain", x = .cell.x, y = .cell.y)]
    OutOfBounds { cell: Cell, n: usize },

    #[error("example at ({x}, {y}) left the version space empty", x = .cell.x, y = .cell.y)]
    InconsistentTeaching { cell: Cell },

    #[error("teacher emitted example at ({x}, {y}) that contradicts the target", x = .cell.x, y = .cell.y)]
    TargetInconsistentExample { cell: Cell },

    #[error("example at ({x}, {y}) is forbidden: {reason}", x = .cell.x, y = .cell.y)]
    ForbiddenExample { cell: Cell, reason: &'static str },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = TeachError> = std::result::Result<T, E>;
