use std::path::PathBuf;

use thiserror::Error;

/// Harness failures, split by CLI exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Invalid or inconsistent configuration (exit code 1).
    #[error("{0}")]
    Config(String),
    /// A core operation rejected its input while validating the config.
    #[error(transparent)]
    Core(#[from] ocba_core::Error),
    /// Failure while running or writing results (exit code 2).
    #[error("{0}")]
    Runtime(String),
    /// Filesystem failure (exit code 2).
    #[error("{path}: {source}")]
    Io {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) | HarnessError::Core(_) => 1,
            HarnessError::Runtime(_) | HarnessError::Io { .. } => 2,
        }
    }

    /// Short machine-readable tag used in `error: <code>:` lines.
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::Config(_) | HarnessError::Core(_) => "config",
            HarnessError::Runtime(_) => "runtime",
            HarnessError::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }
}

/// Result alias for the harness.
pub type HarnessResult<T> = Result<T, HarnessError>;
