use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("{0}")]
    Domain(String),

    /// The matrix cannot be extended to an element of GL_n(Z).
    #[error("matrix is not unimodular (gcd of full-rank minors is {gcd})")]
    NotUnimodular { gcd: BigInt },

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration needs {required} cases but the budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
