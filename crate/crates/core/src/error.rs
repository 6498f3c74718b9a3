use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid Gaussian state: {0}")]
    InvalidState(String),

    #[error("invalid mode vector: {0}")]
    InvalidModeVector(String),

    /// `a(c) ρ a†(c) = 0`: the subtracted state does not exist. `kernel_vector`
    /// is `m_c`, which lies in `Ker(V - I)` and is orthogonal to the displacement.
    #[error("annihilating subtraction: m_c lies in Ker(V - I) and is orthogonal to d")]
    AnnihilatingSubtraction { kernel_vector: Vec<Complex64> },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("precision matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("polynomial degree {degree} exceeds the bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },

    #[error("finite-difference step {step:e} is too small")]
    StepUnderflow { step: f64 },

    #[error("{what} did not converge (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        error: f64,
    },
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidModeVector(_) => "InvalidModeVector",
            Error::AnnihilatingSubtraction { .. } => "AnnihilatingSubtraction",
            Error::Domain(_) => "Domain",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::DegreeOverflow { .. } => "DegreeOverflow",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::NonConvergence { .. } => "NonConvergence",
        }
    }
}
