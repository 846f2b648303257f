use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while reading a polytope or locating its center.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    /// Constraint index is zero-based; the message reports it one-based.
    #[error("constraint {} has an all-zero coefficient row", .row + 1)]
    ZeroRow { row: usize },

    #[error("need more constraints than dimensions, got m = {m}, n = {n}")]
    TooFewConstraints { m: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is not strictly interior: constraint {} has residual {residual:e}", .constraint + 1)]
    NotInterior { constraint: usize, residual: f64 },

    #[error(
        "no interior point found after {iterations} relaxation steps; the interior may be empty"
    )]
    NoInteriorPoint { iterations: usize },

    #[error("line leaves the polytope without meeting a constraint in the {} direction; the polytope is not bounded along it", if *.forward { "forward" } else { "backward" })]
    UnboundedDirection { forward: bool },

    #[error("invalid bracket ({d_minus}, {d_plus}) for the harmonic equation")]
    BracketInvalid { d_minus: f64, d_plus: f64 },

    #[error("harmonic solve did not converge in {iterations} iterations (best offset {best_h})")]
    MaxIterExceeded { iterations: usize, best_h: f64 },

    #[error(
        "point is the harmonic center (|F| = {fnorm:e}); the harmonic hyperplane is undefined"
    )]
    DegenerateAtCenter { fnorm: f64 },

    #[error("axis {axis} is out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("direction vector must be finite and nonzero")]
    InvalidDirection,

    #[error("rendering supports only 2-D polytopes, got n = {n}")]
    DimensionUnsupported { n: usize },
}
