use thiserror::Error;

/// Errors produced by the algebra engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Attempted to invert or divide by zero in a field.
    #[error("division by zero")]
    DivisionByZero,

    /// Two elements (or polynomials) from incompatible fields/rings were combined.
    #[error("mismatched algebraic structures: {0}")]
    Mismatch(String),

    /// Caller violated a documented precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A configured resource cap was exceeded; carries progress statistics.
    #[error("resource limit exceeded in {what}: {progress}")]
    ResourceLimit { what: String, progress: String },

    /// Computation was cancelled through a cancellation token.
    #[error("computation cancelled")]
    Cancelled,

    /// Input is geometrically degenerate for the requested construction.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Rejection sampling did not find a suitable object within the attempt cap.
    #[error("sampling failed after {attempts} attempts: {hint}")]
    SamplingFailure { attempts: usize, hint: String },

    /// Text input (polynomials, field literals, curve files) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal invariant was violated (a bug, not a user error).
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn mismatch(what: impl Into<String>) -> Self {
        Error::Mismatch(what.into())
    }
    pub fn usage(what: impl Into<String>) -> Self {
        Error::Usage(what.into())
    }
    pub fn internal(what: impl Into<String>) -> Self {
        Error::Internal(what.into())
    }
}
