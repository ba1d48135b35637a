use thiserror::Error;

/// Errors surfaced by the optimizer, the benchmark families and the
/// verification layer.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called on state that cannot satisfy it.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An enumeration or materialization would exceed its configured budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A per-generation invariant check failed while strict checking was on.
    #[error("invariant violation at generation {generation}: {details}")]
    InvariantViolation { generation: u64, details: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn invalid_state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
