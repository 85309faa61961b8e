use crate::evolution::{InvariantSeries, SimState};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain too short: {0}")]
    DomainTooShort(String),

    #[error("field is identically zero")]
    ZeroField,

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("shooting failed: {0}")]
    Shooting(String),

    #[error("integration failed at t = {}: {}", .0.state.t, .0.reason)]
    IntegrationFailure(Box<IntegrationFailure>),

    #[error("under-resolved run: {0}")]
    UnderResolved(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Payload of [`Error::IntegrationFailure`]: the last finite state and the
/// invariants recorded up to it.
#[derive(Debug, Clone)]
pub struct IntegrationFailure {
    pub reason: String,
    pub state: SimState,
    pub partial: InvariantSeries,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
