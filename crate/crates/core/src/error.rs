use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("k = {k} exceeds the exhaustive enumeration cap of {cap}")]
    CapExceeded { k: usize, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypergeometric pole: lower parameter c = {0} is a nonpositive integer")]
    Pole(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("work budget exceeded: {required} index tuples requested, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
