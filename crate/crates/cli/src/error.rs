use std::path::PathBuf;
use thiserror::Error;
use thurston_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 1 for rule and precondition failures, 2 for bad invocations, 3 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_)
                | CoreError::LevelCap { .. }
                | CoreError::LevelUnavailable { .. }
                | CoreError::DepthExhausted { .. }
                | CoreError::DepthBudgetExceeded { .. }
                | CoreError::InvalidCell(_) => 2,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
