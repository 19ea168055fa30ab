use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch in {op}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("buffer of length {found} cannot hold a {rows}x{cols} matrix")]
    BufferLength { rows: usize, cols: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// DEIM met a basis column that is dependent on the earlier ones.
    #[error("basis matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },

    #[error("Voronoi set {set} is empty but needs a centroid of dimension {dim}")]
    EmptySet { set: usize, dim: usize },

    #[error("Voronoi set {set} has {size} columns, fewer than its dimension {dim}")]
    SetTooSmall { set: usize, size: usize, dim: usize },

    #[error("requested rank {requested} exceeds the pooled rank {available} of the partition")]
    PooledRankTooSmall { requested: usize, available: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
