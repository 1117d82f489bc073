use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("ring element does not belong to this ring")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("elements do not form a basis (Gram matrix is singular)")]
    NotABasis,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension {dim} exceeds the dense limit {limit}")]
    DenseLimit { dim: usize, limit: usize },
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("generators {0} and {1} do not commute")]
    NoncommutingPair(usize, usize),
    #[error("generators produce a nontrivial phase times identity")]
    InconsistentPhase,
    #[error("generators are not independent")]
    NotIndependent,
    #[error("local stabilizers admit no complementary generators in the region group")]
    NoComplement,
    #[error("region {0:?} is not contained in the enclosing region")]
    RegionNotContained(Vec<usize>),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("regions overlap")]
    OverlappingRegions,
    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("gate is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("geometry too small: {0}")]
    GeometryTooSmall(String),
    #[error("region is not an annulus: {0}")]
    NotAnAnnulus(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
