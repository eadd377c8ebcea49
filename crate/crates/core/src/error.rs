use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace {trace:.3e} vanishes below numeric resolution")]
    VanishingTrace { trace: f64 },

    #[error("unsupported branch: {0}")]
    UnsupportedBranch(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("numeric degradation: {0}")]
    NumericDegradation(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid fit: {0}")]
    InvalidFit(String),

    #[error("correlation undefined: zero variance")]
    UndefinedCorrelation,

    #[error("pattern requires a fitted slope outside the unbroken phase")]
    ClassificationNeedsFit,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures caused by arithmetic breakdown rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotPsd { .. }
                | Error::VanishingTrace { .. }
                | Error::InternalConsistency(_)
                | Error::NumericDegradation(_)
        )
    }
}
