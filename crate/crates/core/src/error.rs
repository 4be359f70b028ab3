use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a digital image needs a positive dimension")]
    ZeroDimension,

    #[error("a digital image needs at least one point")]
    EmptyImage,

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("point {0} is not in the image")]
    PointNotInImage(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("map is not continuous: {0}")]
    NotContinuous(String),

    #[error("not an inclusion: {0}")]
    NotInclusion(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration cap of {cap} maps exceeded")]
    CapExceeded { cap: usize },

    #[error("homotopies do not meet: {0}")]
    JunctionMismatch(String),

    #[error("not a loop: {0}")]
    NotALoop(String),

    #[error("diagram does not commute: {0}")]
    DiagramMismatch(String),

    #[error("internal error, a constructed witness failed verification: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
