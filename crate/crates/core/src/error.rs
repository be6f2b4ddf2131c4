use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group closure exceeded {cap} elements (monodromy is not finite or the cap is too small)")]
    ClosureOverflow { cap: usize },

    #[error("degree {degree} exceeds the enumeration cap {cap}; raise --cap to proceed")]
    CapExceeded { degree: usize, cap: usize },

    #[error("invalid passport: {0}")]
    InvalidPassport(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("singular jacobian")]
    SingularJacobian,

    #[error("certification failed at {point}: {reason}")]
    CertificationFailed { point: String, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
