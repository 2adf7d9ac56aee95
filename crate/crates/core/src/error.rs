use thiserror::Error;

use crate::capacity::Violation;
use crate::second_order::ValidityReason;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("covariance matrix is singular (smallest eigenvalue {min_eigenvalue:.3e})")]
    SingularCovariance { min_eigenvalue: f64 },

    #[error("invalid covariance pair: {reason}")]
    InvalidPair { reason: ValidityReason },

    #[error("circularity coefficient {lambda_max} is too close to one")]
    SpectrumAtOne { lambda_max: f64 },

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("sample set contains coincident points; nearest-neighbour distances vanish")]
    DegenerateSamples,

    #[error("phase is (almost surely) a function of the remaining coordinates; conditional density does not exist")]
    DegenerateConditional,

    #[error("mean vector must be zero")]
    NonzeroMean,

    #[error("channel assumptions violated: {}", fmt_violations(.0))]
    AssumptionViolated(Vec<Violation>),

    #[error("input power {trace} exceeds budget {budget}")]
    PowerExceeded { trace: f64, budget: f64 },

    #[error("noise is not circular (complementary covariance norm {norm:.3e})")]
    NoiseNotCircular { norm: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    /// Stable upper-case tag, used in CLI diagnostics.
    pub fn code(&self) -> String {
        let s = match self {
            Error::NotSymmetric { .. } => "NOT_SYMMETRIC",
            Error::NotHermitian { .. } => "NOT_HERMITIAN",
            Error::NotPositiveDefinite { .. } => "NOT_POSITIVE_DEFINITE",
            Error::NotPositiveSemidefinite { .. } => "NOT_POSITIVE_SEMIDEFINITE",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::SingularCovariance { .. } => "SINGULAR_COVARIANCE",
            Error::InvalidPair { reason } => return reason.to_string(),
            Error::SpectrumAtOne { .. } => "SPECTRUM_AT_ONE",
            Error::TooFewSamples { .. } => "TOO_FEW_SAMPLES",
            Error::DegenerateSamples => "DEGENERATE_SAMPLES",
            Error::DegenerateConditional => "DEGENERATE_CONDITIONAL",
            Error::NonzeroMean => "NONZERO_MEAN",
            Error::AssumptionViolated(_) => "ASSUMPTION_VIOLATED",
            Error::PowerExceeded { .. } => "POWER_EXCEEDED",
            Error::NoiseNotCircular { .. } => "NOISE_NOT_CIRCULAR",
            Error::NonFinite(_) => "NON_FINITE",
        };
        s.to_string()
    }
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
