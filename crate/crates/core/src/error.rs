use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unrecognised token `{token}`")]
    Token { token: String },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("{what} {value} out of range 1..={max}")]
    OutOfRange { what: &'static str, value: usize, max: usize },

    #[error("braid is not pure: underlying permutation {0:?}")]
    NotPure(Vec<usize>),

    #[error("nilpotency class {have} too small, need at least {need}")]
    InsufficientClass { need: usize, have: usize },

    #[error("degree {degree} exceeds the validated case table (max {max})")]
    UnvalidatedCaseTable { degree: usize, max: usize },

    #[error("inhomogeneous diagram vector (degrees {0} and {1})")]
    Inhomogeneous(usize, usize),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
