use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input violates a documented precondition.
    #[error("invalid input: {0}")]
    InputDomain(String),

    /// An exact routine was asked to run above its configured size limit.
    #[error("{what}: instance size {size} exceeds limit {limit}")]
    ResourceLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// A consistency check inside the library failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InputDomain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
