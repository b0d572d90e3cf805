use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] nikolskii::Error),
    /// Some rows or methods failed; output was still written.
    #[error("{0}")]
    Failures(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 usage, 2 numerical failure, 3 invariant violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) | CliError::Failures(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
