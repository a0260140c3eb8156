use thiserror::Error;

/// Errors raised by the projection, derivative and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector must have at least one coordinate")]
    EmptyVector,
    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },
    #[error("reference vector is zero")]
    ZeroReference,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("point is not on the boundary of the ball (signed gap {signed_gap:e})")]
    NotBoundary { signed_gap: f64 },
    #[error("direction is the zero vector")]
    ZeroDirection,
    #[error("projection is not differentiable at a boundary point")]
    NotDifferentiable,
    #[error("segment bounds are inverted: lo = {lo}, hi = {hi}")]
    InvalidSegment { lo: f64, hi: f64 },
    #[error("schedule must be non-empty, positive and strictly decreasing")]
    InvalidSchedule,
    #[error("expected a two-dimensional ball, got dimension {0}")]
    NotTwoDimensional(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
