use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, configuration or input files (exit code 2).
    #[error("{0}")]
    Usage(String),
    /// The computation itself failed (exit code 1).
    #[error(transparent)]
    Compute(#[from] subeq_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
