use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Budget(pmconv_core::Error),
    #[error("statistic `{statistic}` failed: {source}")]
    Statistic {
        statistic: String,
        source: pmconv_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 2 for config errors, 3 for budget errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Budget(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn from_core(statistic: &str, e: pmconv_core::Error) -> Self {
        match e {
            pmconv_core::Error::BudgetExceeded { .. } => CliError::Budget(e),
            source => CliError::Statistic {
                statistic: statistic.to_string(),
                source,
            },
        }
    }
}
