use thiserror::Error;

/// Errors raised by the geometric and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame is rank deficient: numerical rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("subspace fills the ambient space; its complement is trivial")]
    FullSpace,

    #[error("frame is not orthonormal (Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("angle {theta} lies inside the degenerate guard band")]
    DegenerateAngle { theta: f64 },

    #[error("cluster index {index} out of range ({count} clusters)")]
    ClusterOutOfRange { index: usize, count: usize },

    #[error("w = {w:e} is not positive")]
    NonPositiveW { w: f64 },

    #[error("point violates the region constraints: {0}")]
    RegionViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("malformed input: {0}")]
    Shape(String),

    #[error("Jacobian is rank deficient (smallest singular value {sigma_min:e})")]
    RankDeficientJacobian { sigma_min: f64 },

    #[error("point {0:?} (or its stencil) leaves the validity box")]
    OutOfBox(Vec<f64>),

    #[error("the cone vertex is excluded")]
    AtVertex,

    #[error("immersion is not spherical (|x| - 1 = {deviation:e})")]
    NotSpherical { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
