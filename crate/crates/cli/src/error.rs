use thiserror::Error;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Physics(vibrad::Error),

    #[error("oracle integrity failure: {0}")]
    Integrity(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Integrity(_) => 4,
        }
    }
}

impl From<vibrad::Error> for CliError {
    fn from(err: vibrad::Error) -> Self {
        match err {
            vibrad::Error::Integrity { .. } => CliError::Integrity(err.to_string()),
            other => CliError::Physics(other),
        }
    }
}

impl From<toml::de::Error> for CliError {
    fn from(err: toml::de::Error) -> Self {
        CliError::Config(err.to_string())
    }
}
