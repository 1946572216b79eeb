use thiserror::Error;

/// Errors raised by the pressure engines and their inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mistake function not monotone: g({n}, {eps}) > g({next}, {eps})", next = n + 1)]
    MonotonicityViolation { n: u64, eps: f64 },

    #[error("census too large: {size} candidates exceed the guard of {limit}")]
    CensusTooLarge { size: f64, limit: f64 },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("radius {0} is not a power of theta")]
    UnalignedRadius(f64),

    #[error("transition matrix is not irreducible")]
    NotIrreducible,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
