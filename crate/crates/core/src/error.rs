use std::path::PathBuf;

use thiserror::Error;

use crate::gmap::DartId;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dart {dart} out of range (map has {num_darts} darts)")]
    DartOutOfRange { dart: DartId, num_darts: usize },

    #[error("involution index {index} out of range for a {dim}-gmap")]
    DimensionOutOfRange { index: usize, dim: usize },

    #[error("malformed involution table: {0}")]
    MalformedTable(String),

    #[error("{dim}-cell with canonical dart {dart} is not orientable")]
    NonOrientableCell { dim: usize, dart: DartId },

    #[error("{dim}-cell with canonical dart {dart} is not removable")]
    NotRemovable { dim: usize, dart: DartId },

    #[error("{dim}-cell with canonical dart {dart} is not contractible")]
    NotContractible { dim: usize, dart: DartId },

    #[error("walk from dart {dart} through the {dim}-cell never reached a sewn dart")]
    NonTerminatingWalk { dim: usize, dart: DartId },

    #[error("boundary of boundary is non-zero in dimension {dim} (column {column})")]
    BoundaryNotNilpotent { dim: usize, column: usize },

    #[error("operation log does not match: {0}")]
    LogMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("edge {{{0}, {1}}} is shared by more than two faces")]
    NonManifoldEdge(usize, usize),

    #[error("empty batch")]
    EmptyBatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
