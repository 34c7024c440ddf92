use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient smoothness: need derivative order {needed}, profile provides {available}")]
    InsufficientSmoothness { needed: u32, available: u32 },

    #[error("missing derivative oracle: {0}")]
    MissingDerivative(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (achieved {achieved:e})")]
    Quadrature { achieved: f64, tolerance: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (relative off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("hypothesis check failed: {0}")]
    Hypothesis(String),

    #[error("insufficient usable eigenvalues: need {needed}, usable {usable}")]
    InsufficientData { needed: usize, usable: usize },

    #[error("spectral parameter {lambda} is within {distance:e} of an eigenvalue")]
    Inadmissible { lambda: f64, distance: f64 },

    #[error("numerical rank failure: {0}")]
    NumericalRank(String),

    #[error("singular Gram matrix at order {order}")]
    SingularGram { order: usize },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// True for failures caused by the caller's parameters rather than by the numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Unsupported(_))
    }

    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::Hypothesis(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
