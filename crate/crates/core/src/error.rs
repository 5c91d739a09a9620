use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Hilbert space labels: {0}")]
    InvalidLabels(String),

    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("operator is not Hermitian (defect {defect:.3e})")]
    NonHermitian { defect: f64 },

    #[error("operator is not unitary (defect {defect:.3e})")]
    NonUnitary { defect: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("basis is not orthonormal (defect {defect:.3e})")]
    NonOrthonormalBasis { defect: f64 },

    #[error("invalid time step: {0}")]
    InvalidStep(String),

    #[error("segment {index} is time-dependent; a constant generator is required")]
    NonConstantSegment { index: usize },

    #[error("invariant breach at t = {time:.6e} us: {what} = {value:.3e}")]
    InvariantBreach {
        time: f64,
        what: &'static str,
        value: f64,
    },

    #[error("invalid model: {0}")]
    InvalidModel(String),
}
