use alloc::string::String;

/// Errors produced by tensor operations and the solver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },

    #[error("Fourier data violates conjugate symmetry (relative imaginary residual {residual:e})")]
    SymmetryViolation { residual: f64 },

    #[error("SVD of Fourier slice {slice} did not converge")]
    NumericalFailure { slice: usize },

    #[error("rank {rank} out of range, at most {max} allowed")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("support size {count} exceeds the {capacity} available entries")]
    CountOutOfRange { count: usize, capacity: usize },

    #[error("operation is undefined for the zero tensor")]
    ZeroTensor,

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
