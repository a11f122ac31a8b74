use thiserror::Error;

/// Errors produced when constructing or combining the toolkit's value types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("order mismatch: host has n = {host}, {what} has n = {other}")]
    OrderMismatch {
        host: usize,
        other: usize,
        what: &'static str,
    },
    #[error("{what} requires an even order, got n = {n}")]
    OddOrder { n: usize, what: &'static str },
    #[error("{what} requires n divisible by {divisor}, got n = {n}")]
    NotDivisible {
        n: usize,
        divisor: usize,
        what: &'static str,
    },
    #[error("no balanced labeling on {n} vertices: n mod 4 must be 0 or 1")]
    UnbalanceableOrder { n: usize },
    #[error("{what} requires n >= {min}, got n = {n}")]
    OrderTooSmall {
        n: usize,
        min: usize,
        what: &'static str,
    },
    #[error("edge count {m} out of range 0..={max} for order {n}")]
    EdgeCountOutOfRange { m: usize, max: usize, n: usize },
    #[error("exhaustive enumeration capped at n = {cap}, got n = {n}; sample instead")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("path system inconsistent with host: {0}")]
    InconsistentSystem(String),
    #[error("triangle factor inconsistent with host: {0}")]
    InconsistentFactor(String),
    #[error("field {field}: {message}")]
    InvalidField { field: String, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
