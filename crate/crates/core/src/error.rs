use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension profile: {0}")]
    InvalidDims(String),

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),

    #[error("matrix is not an isometry (max deviation of V†V from I is {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("images are not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("states are not orthogonal (|<a|b>| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("empty state list")]
    EmptyStateList,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("decomposition search failed after {restarts} restarts (best residual {residual:e})")]
    SearchFailed { restarts: usize, residual: f64 },

    #[error("cheating is impossible: B marginals differ by trace distance {distance:e}")]
    UnequalMarginals { distance: f64 },

    #[error("basis alignment failed: {0}")]
    AlignmentFailed(String),

    #[error("malformed input: {0}")]
    Format(String),
}
