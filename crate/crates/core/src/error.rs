use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input")]
    Empty,
    #[error("non-finite coordinate or radius")]
    NonFinite,
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("duplicate point: index {duplicate} repeats index {first}")]
    DuplicatePoint { first: usize, duplicate: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid lens: {0}")]
    InvalidLens(String),
    #[error("lens {0:?} is already removed at radius {1}")]
    LensRemoved(Vec<usize>, f64),
    #[error("resource limit exceeded: {what} ({count} > {limit})")]
    ResourceLimit { what: &'static str, count: usize, limit: usize },
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("nonpositive diagram coordinate {0}")]
    NonPositiveCoordinate(f64),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
