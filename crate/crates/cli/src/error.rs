use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {source}")]
    Core { context: String, source: hyperenvy::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn field(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Field {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn core(context: impl Into<String>, source: hyperenvy::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    /// 1 for an unsatisfiable request, 2 for bad input, 3 for internal faults.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } => match source {
                hyperenvy::Error::Infeasible | hyperenvy::Error::DeltaTooLarge { .. } => 1,
                hyperenvy::Error::Internal(_) => 3,
                _ => 2,
            },
            CliError::Io { .. } => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
