use thiserror::Error;

/// Errors raised across the construction and verification pipelines.
#[derive(Debug, Error)]
pub enum GknError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dim W = {dim_w} exceeds the deficiency index {deficiency} (dimensionality condition dim W <= def T0)")]
    DimensionalityCondition { dim_w: usize, deficiency: usize },

    #[error("invalid GKN set: {0}")]
    InvalidGknSet(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GknError>;
