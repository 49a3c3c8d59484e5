use std::path::PathBuf;

/// Failures of the harness, grouped by the exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad arguments or an invalid configuration file.
    #[error("{0}")]
    Usage(String),
    /// One or more invariants or reference values did not reproduce.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] qproc_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        HarnessError::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
