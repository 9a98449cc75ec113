use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian within tolerance (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is numerically singular (smallest singular value {sigma_min:e})")]
    Singular { sigma_min: f64 },
    #[error("invalid tolerance: abs and rel must be non-negative and not both zero")]
    InvalidTolerance,
    #[error("evaluation point {z} lies within {distance:e} of a pole{}", block.map(|b| format!(" (block {b})")).unwrap_or_default())]
    PoleProximity { z: Complex64, distance: f64, block: Option<usize> },
    #[error("the momentum model has no common spectral gap")]
    NoCommonGap,
    #[error("point {a} is not in the common gap {gap}")]
    GapViolation { a: f64, gap: String },
    #[error("gamma field is not single valued: mul Gamma_0 on the defect space is non-trivial")]
    MultivaluedBoundary,
    #[error("form evaluated at a real point (Im lambda = 0)")]
    DomainViolation,
    #[error("triangular transform needs an invertible G (smallest singular value {sigma_min:e})")]
    SingularG { sigma_min: f64 },
    #[error("1/{lambda} is an eigenvalue of A0inv: resolvent pole")]
    ResolventPole { lambda: Complex64 },
    #[error("lambda = 0 is not allowed here")]
    ZeroLambda,
    #[error("sequence length {found} does not match lattice length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("renormalization scheme {scheme} does not apply to model {model}")]
    SchemeMismatch { scheme: String, model: String },
    #[error("boundary relation is not selfadjoint (residual {residual:e})")]
    NonSelfadjointTheta { residual: f64 },
    #[error("the point {lambda} is an eigenvalue of the operator being inverted")]
    EigenvalueHit { lambda: Complex64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
