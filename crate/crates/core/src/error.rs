use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A derivative of the binary entropy was requested at an endpoint.
    #[error("pole: {0}")]
    Pole(String),

    /// A parameter tuple violates one of the defining inequalities of the
    /// admissible set.
    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    /// A precondition specific to a closed-form route does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested computation exceeds a configured size cap.
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    SizeCap {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    /// A matrix failed validation as a density matrix.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// Exact integer arithmetic overflowed its fixed-width fast path.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
