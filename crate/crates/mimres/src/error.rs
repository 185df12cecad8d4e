//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("jet shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("derivative order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("parameter index {index} is out of bounds for a vector of length {len}")]
    UnboundParam { index: usize, len: usize },

    #[error("node is not recorded on this tape")]
    UnknownNode,

    #[error("backward root must be a scalar (width-1) node")]
    NonScalarRoot,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("relative L2 denominator is zero (degenerate exact field)")]
    ZeroDenominator,

    #[error("non-finite value at iteration {iteration}: loss {loss}, max |grad| {max_grad}")]
    NonFinite {
        iteration: u64,
        loss: f64,
        max_grad: f64,
    },

    #[error("corrupt checkpoint: {0}")]
    BadCheckpoint(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
