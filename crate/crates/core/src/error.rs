use alloc::string::String;

/// Errors raised by the linear algebra layer, the processor engine and the loop engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is singular (smallest singular value {smallest:e}, threshold {threshold:e})")]
    SingularOperator { smallest: f64, threshold: f64 },

    #[error("operator is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("ket is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid processor: {0}")]
    InvalidProcessor(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("cannot expand the zero operator")]
    ZeroOperator,

    #[error("program is singular: applied diagonal entry {index} vanishes")]
    SingularProgram { index: usize },

    #[error("operator cannot be encoded by this rule: {0}")]
    NotEncodable(String),

    #[error("outcome tree exceeds the node budget ({budget}) and is not homogeneous")]
    TreeBudgetExceeded { budget: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
