use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("trace must be 1, got {0}")]
    NotNormalized(f64),

    #[error("invalid qubit index {0} (expected 0 for A or 1 for B)")]
    InvalidQubit(usize),

    #[error("unknown Bell state label `{0}`")]
    UnknownBellLabel(String),

    #[error("vector is not unit length (norm {0})")]
    NotUnitVector(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state fully blocked by filters (trace {0:.3e})")]
    Blocked(f64),

    #[error("target state is not pure (purity {0})")]
    NotPure(f64),

    #[error("unphysical filter configuration (denominator {0})")]
    UnphysicalFilter(f64),

    #[error("correlation vector vanishes; compensating filter orientation is undefined")]
    UndefinedOrientation,

    #[error("correlation matrix invalid: |T g| = {0} exceeds 1")]
    InvalidCorrelation(f64),

    #[error("insufficient statistics: setting group {0} has zero total counts")]
    InsufficientStatistics(String),

    #[error("tomography record malformed: {0}")]
    MalformedRecord(String),

    #[error("eigensolver did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
