use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tuple must have at least one entry")]
    EmptyTuple,

    #[error("tuple entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("index {index} out of range for tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("f_k requires 1 <= k <= N, got k = {k}, N = {n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("compact secular form is undefined at z = 0")]
    DegenerateInput,

    #[error("invalid search region: {0}")]
    InvalidRegion(String),

    #[error("argument principle failed on region {region}: {reason}")]
    WindingFailed { region: String, reason: String },

    #[error("root refinement did not converge in region {region}")]
    NonConvergence { region: String },

    #[error("z = {z} is not a root (smallest pivot {pivot:e})")]
    NotARoot { z: String, pivot: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
