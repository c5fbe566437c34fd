//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by constructors, enumerators and verification operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input violates a documented precondition (malformed table, mismatched
    /// carriers, non-equivariant map, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration would explore more candidates than the configured
    /// budget allows.
    #[error("enumeration budget exceeded while {context} (budget {budget} candidates)")]
    BudgetExceeded { context: String, budget: u64 },

    /// A uniqueness or coherence property that the oracle is supposed to
    /// guarantee failed; signals a broken oracle, not bad user input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn budget(context: impl Into<String>, budget: u64) -> Self {
        Error::BudgetExceeded {
            context: context.into(),
            budget,
        }
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
