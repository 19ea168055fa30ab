use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::idx::IdxError;
use crate::textfmt::TextFormatError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Idx {
        path: PathBuf,
        #[source]
        source: IdxError,
    },
    #[error("{path}: {source}")]
    Text {
        path: PathBuf,
        #[source]
        source: TextFormatError,
    },
    #[error("{path}: {reason}")]
    Csv { path: PathBuf, reason: String },
    #[error(transparent)]
    Core(#[from] voronoi_cur_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for I/O and unreadable input, 2 for bad flags or parameters.
    pub fn exit_code(&self) -> i32 {
        use voronoi_cur_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::InvalidParameter { .. } | E::DimensionMismatch { .. }) => 2,
            CliError::Core(E::PooledRankTooSmall { .. }) => 2,
            _ => 1,
        }
    }
}
