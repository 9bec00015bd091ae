use thiserror::Error;

/// Errors raised by the simulation and analytics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Fock truncation too small for |alpha|^2 = {alpha2}: dim {dim}, use at least {suggested}")]
    Truncation { alpha2: f64, dim: usize, suggested: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    #[error("basis construction failed: {0}")]
    BasisConstruction(String),

    #[error("joint dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("integration accuracy: {0}")]
    IntegrationAccuracy(String),

    #[error("steady state is not unique: {0}")]
    NonUniqueSteadyState(String),

    #[error("singular matrix encountered in {0}")]
    Singular(String),

    #[error("detuning must be nonzero")]
    SingularDetuning,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fit failed: {0}")]
    FitFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
