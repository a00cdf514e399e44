use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation exhausted at order {truncation}; retry with a larger truncation")]
    TruncationExhausted { truncation: usize },
    #[error("m·λ not integral: m = {m}, λ = {lambda}")]
    IncompatibleLevel { m: u32, lambda: String },
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("degree cap unstable: count {low} at cap {cap}, {high} at cap {}", cap + 2)]
    DegreeCapUnstable { cap: u32, low: usize, high: usize },
    #[error("non-termination guard tripped after {steps} reduction steps")]
    NonTermination { steps: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("zero section has no flag value")]
    ZeroSection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not in the body")]
    NotInBody,
    #[error("conditions (i)-(iii) violated: {0}")]
    ConditionsViolated(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
