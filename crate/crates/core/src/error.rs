use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} unsupported (expected 1 ≤ d ≤ 5; bodies need d ≥ 2)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("iteration did not converge: {0}")]
    NotConverged(String),
    #[error("point lies outside the body")]
    OutsideBody,
    #[error("ray distance is undefined at the origin")]
    OriginQuery,
    #[error("requested depth {depth} is not below the origin depth {max}")]
    DepthTooLarge { depth: f64, max: f64 },
    #[error("cap width {width} not in (0, {max})")]
    WidthTooLarge { width: f64, max: f64 },
    #[error("point is (numerically) on the boundary, δ = {0:e}")]
    BoundaryPoint(f64),
    #[error("epsilon {eps} too large (limit {limit})")]
    EpsilonTooLarge { eps: f64, limit: f64 },
    #[error("polar center is not interior to the polytope")]
    CenterNotInterior,
    #[error("polarity undefined for the origin or hyperplanes through it")]
    OriginPolar,
    #[error("invalid geometry: {0}")]
    GeometryInvalid(String),
    #[error("layer constants infeasible: total gap {gap} exceeds {eps}")]
    ConstantsInfeasible { gap: f64, eps: f64 },
    #[error("polytope is not contained in the body (vertex {index} outside by {excess:e})")]
    NotNested { index: usize, excess: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {cause}")]
    Io { path: String, cause: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
