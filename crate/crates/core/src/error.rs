use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation is undefined for the given data (e.g. PAPR of a zero signal).
    #[error("domain error: {0}")]
    Domain(String),

    /// Exhaustive enumeration refused because the combination count exceeds the budget.
    #[error(
        "exhaustive search refused: C({n},{m}) = {} exceeds budget {budget}",
        combinations.map_or_else(|| "more than u128::MAX".to_string(), |c| c.to_string())
    )]
    BudgetExceeded {
        n: usize,
        m: usize,
        /// None when the count itself overflows u128.
        combinations: Option<u128>,
        budget: u128,
    },

    /// A PRT-set file failed to parse or validate.
    #[error("invalid PRT set file: {0}")]
    PrtFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
