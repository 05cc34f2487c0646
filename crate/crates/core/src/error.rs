use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("zero-frequency coefficient must vanish (|c0| = {magnitude:e}); band-pass the data first")]
    NonzeroZeroMode { magnitude: f64 },

    #[error("field must be real (max |im| = {max_imag:e})")]
    NonRealField { max_imag: f64 },

    #[error("kernel regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("{what} did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Convergence {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by inputs violating a precondition, as opposed
    /// to numerical or I/O failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::DimensionMismatch { .. }
                | Error::NonzeroZeroMode { .. }
                | Error::NonRealField { .. }
                | Error::RegimeMismatch(_)
        )
    }
}
