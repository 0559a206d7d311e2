use alloc::string::{String, ToString};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive computation would exceed its configured guard.
    #[error("resource guard `{guard}` exceeded: need {needed}, limit {limit}")]
    Resource {
        guard: &'static str,
        needed: String,
        limit: String,
    },
    /// The family is not `phi(M)` for any induced matching `M`.
    #[error("family is not in the image of phi: {0}")]
    NotInImage(String),
    #[error("root finder failed: {0}")]
    Solver(String),
    #[error("certificate verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(
        guard: &'static str,
        needed: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::Resource {
            guard,
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }
}
