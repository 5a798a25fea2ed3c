use thiserror::Error;

/// Errors raised when inputs violate the domain invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("profile must contain at least one agent")]
    EmptyProfile,
    #[error("coordinate {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("placement must hold 1 or 2 facilities, got {0}")]
    FacilityCount(usize),
    #[error("gamma {0} is outside [0, 1/2]")]
    GammaOutOfRange(f64),
    #[error("negative value {0} passed to the Gini index")]
    NegativeValue(f64),
    #[error("{phantoms} phantoms given for {agents} agents (at most n-1 allowed)")]
    TooManyPhantoms { phantoms: usize, agents: usize },
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("invalid numeric policy: {0}")]
    InvalidPolicy(String),
    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
    #[error("invalid search range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
