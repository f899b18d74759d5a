use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter violates its documented range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A non-finite or out-of-domain number reached a numeric routine.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The input carries too little information for the statistic
    /// (zero variance, too few samples, no positive tail values).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
