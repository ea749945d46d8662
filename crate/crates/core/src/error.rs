use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polytope is not full-dimensional (affine hull has dimension {0})")]
    NotFullDimensional(usize),
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("origin is not a lattice point of the polytope")]
    OriginMissing,
    #[error("boundary volume is undefined in dimension {0}")]
    DimensionTooSmall(usize),
    #[error("dimension {0} is outside the supported range")]
    UnsupportedDimension(usize),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog name: {0}")]
    UnknownName(String),
    #[error("no triangulation strategy for face with vertices {0}")]
    NoStrategy(String),
    #[error("triangulation covers volume {found}, expected {expected}")]
    CoverageError { expected: String, found: String },
    #[error("ehrhart coefficient mismatch: {0}")]
    CoefficientMismatch(String),
    #[error("cut at lattice distance one has non-integral base")]
    NonIntegralCut,
    #[error("no triangulation of the dilate is available: {0}")]
    NoTriangulation(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("size budget exceeded: {0}")]
    Budget(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
