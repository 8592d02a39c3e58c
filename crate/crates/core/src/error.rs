use thiserror::Error;

/// Errors raised by the operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The query or payload violates an operation's precondition.
    #[error("malformed query: {0}")]
    Malformed(String),

    /// A requested enumeration is too large to materialize.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Input tables do not describe the structure they claim to.
    #[error("internal consistency: {0}")]
    Consistency(String),

    /// A window cannot be realized by any prefix-exchange map; `witness` is the
    /// key (rendered as a clopen) that breaks it.
    #[error("inconsistent window at key {witness}: {reason}")]
    Inconsistent { witness: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}
