use homodyne_core::error::ErrorCategory;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] homodyne_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Config = 2,
    Domain = 3,
    Numerical = 4,
    Io = 5,
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::Config,
            CliError::Core(e) => match e.category() {
                ErrorCategory::Config => ExitCode::Config,
                ErrorCategory::Domain => ExitCode::Domain,
                ErrorCategory::Numerical => ExitCode::Numerical,
            },
            CliError::Verification(_) => ExitCode::Numerical,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => ExitCode::Io,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
