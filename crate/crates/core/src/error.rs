use thiserror::Error;

/// Errors raised by the library. Every variant is an input error (a
/// contract the caller violated) or a semantic failure the caller asked
/// us to detect.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid symmetric sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid operad: {0}")]
    InvalidOperad(String),

    #[error("arity {arity} exceeds the enumeration limit {limit}")]
    TooLarge { arity: usize, limit: usize },

    #[error("component at arity {0} is not enumerable")]
    NotEnumerable(usize),

    #[error("not an operad map: {0}")]
    NotOperadMap(String),

    #[error("interchange violated between {p} and {q}")]
    InterchangeViolation { p: String, q: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is numerically singular (|det| = {det:e}, diagonal ratio {ratio:e})")]
    Singular { det: f64, ratio: f64 },

    #[error("matrix is not in group {tag}: {reason}")]
    NotInGroup { tag: String, reason: String },

    #[error("point outside the open cube: {0:?}")]
    OutsideCube(Vec<f64>),

    #[error("invalid cube tuple: {0}")]
    InvalidTuple(String),

    #[error("tuple is not equidiameter")]
    NotEquidiameter,

    #[error("tuple is not freewheeling")]
    NotFreewheeling,

    #[error("sampling budget exhausted after {0} attempts")]
    Capacity(usize),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
