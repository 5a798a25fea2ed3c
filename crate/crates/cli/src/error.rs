use thiserror::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for I/O and other runtime failures.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for malformed flags, values or config files.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when a strategy-proofness violation was found.
pub const EXIT_MANIPULABLE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    /// Rejected input such as an out-of-range profile or gamma.
    #[error("invalid input: {0}")]
    Invalid(#[from] equifac::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Csv(_) => EXIT_FAILURE,
        }
    }
}
