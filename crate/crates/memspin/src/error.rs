use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error(transparent)]
    Model(#[from] memspin_core::Error),

    #[error("m_x is not stationary: half-window means {first:.4} and {second:.4} (tolerance {tolerance:.4}); lengthen the burn-in")]
    NonStationary { first: f64, second: f64, tolerance: f64 },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

impl RunError {
    /// 2 for bad input, 3 for numerical failure, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 2,
            RunError::Model(memspin_core::Error::InvalidParameter { .. } | memspin_core::Error::UnsupportedOrder { .. }) => 2,
            RunError::Model(_) | RunError::NonStationary { .. } => 3,
            RunError::Io { .. } | RunError::Csv { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> RunError {
        let path = path.into();
        move |source| RunError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;
