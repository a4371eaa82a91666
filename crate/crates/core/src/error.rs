use thiserror::Error;

/// Errors produced by the kernels in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclic factor {0}: every factor must be at least 2")]
    InvalidFactor(u64),

    #[error("cannot parse group spec {0:?}")]
    GroupSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} budget exceeded: need {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("function table is not a bijection")]
    NotBijective,

    #[error("no prediction available: {0}")]
    NoPrediction(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.into(),
            cap: cap.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
