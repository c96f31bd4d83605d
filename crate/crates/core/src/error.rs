use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The angle sits at (or within 1e-3 of) a multiple of π where the kernel
    /// degenerates into a delta function, or a closed form needs a finite
    /// tangent and the angle is an odd multiple of π/2.
    #[error("singular angle α = {alpha} rad: {reason}")]
    SingularAngle { alpha: f64, reason: &'static str },

    #[error("grid too coarse for the kernel chirp: step {step} exceeds the limit {limit}")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("Hermite degree {0} out of range (max {max})", max = crate::kernel::MAX_HERMITE_DEGREE)]
    DegreeOutOfRange(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("covariance is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("point {0} lies outside the analysis interval")]
    OutOfInterval(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("at least {needed} realizations required, got {got}")]
    TooFewRealizations { needed: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

impl Error {
    /// True for errors rooted in numerics (as opposed to bad input or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularAngle { .. }
                | Error::GridTooCoarse { .. }
                | Error::NotPositiveDefinite
                | Error::NotPsd(_)
                | Error::DegreeOutOfRange(_)
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Format(_)
        )
    }
}
