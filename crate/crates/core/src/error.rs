//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::lattice::Cell;

/// Errors produced while building, parsing, solving or verifying.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs at least one cell received an empty set.
    #[error("voxel set is empty")]
    EmptySet,

    /// Two sets that were expected to be disjoint share a cell.
    #[error("sets overlap at cell {cell:?}")]
    Overlap {
        /// One cell present in both operands.
        cell: Vec<i32>,
    },

    /// Operands or inputs disagree on the lattice dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Dimension required by the receiving object.
        expected: usize,
        /// Dimension that was supplied.
        found: usize,
    },

    /// Dimension outside the supported range `1..=4`.
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    /// Malformed text input.
    #[error("parse error at line {line}: {message}")]
    Parse {
        /// One-based line number of the offending line.
        line: usize,
        /// Description of the problem.
        message: String,
    },

    /// A Wang tile set or tiling that breaks its invariants.
    #[error("invalid Wang data: {0}")]
    Wang(String),

    /// A placement or region that is not well formed.
    #[error("invalid cover instance: {0}")]
    Instance(String),

    /// A witness that fails verification.
    #[error("witness rejected: {0}")]
    Witness(String),

    /// The checked-in block atlas does not match its manifest.
    #[error("atlas integrity failure: {0}")]
    Atlas(String),

    /// A diagram request that cannot be honoured.
    #[error("cannot render: {0}")]
    Render(String),

    /// Filesystem failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON encoding or decoding failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn overlap(dim: usize, cell: Cell) -> Self {
        Error::Overlap {
            cell: cell[..dim].to_vec(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
