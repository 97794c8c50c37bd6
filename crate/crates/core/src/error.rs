use thiserror::Error;

/// Errors raised by constructors and operations whose preconditions fail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank mismatch: B_{left} vs B_{right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank {0} is out of range (0..=6)")]
    RankOutOfRange(usize),
    #[error("B_r-module needs {expected} operators, got {got}")]
    OperatorCount { expected: usize, got: usize },
    #[error("operator {op} does not act on carrier {carrier}")]
    CarrierMismatch { op: String, carrier: String },
    #[error("B_r-module description has not been validated")]
    Unvalidated,
    #[error("B_r-module fails its relations: {0}")]
    InvalidModule(String),
    #[error("matrix is singular")]
    Singular,
    #[error("interpolation nodes must be distinct")]
    RepeatedNode,
    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("sampled values are not a polynomial of degree <= {0}")]
    DegreeExceeded(usize),
    #[error("the seed element is zero")]
    ZeroSeed,
    #[error("the seed element lies outside the probe window")]
    SeedOutsideWindow,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("probe caps must be at least 1")]
    EmptyWindow,
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
