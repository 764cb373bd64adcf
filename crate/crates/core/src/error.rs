use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Budget exhaustion is reported through [`Error::ResourceLimit`] and is
/// never turned into a definite verdict by callers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix of rank {rank} is rank deficient (expected {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("data not normalized: {0}")]
    NotNormalized(String),

    #[error("kappa is not integral at position {0}")]
    NonIntegralKappa(usize),

    #[error("Groebner budget of {budget} S-pairs exhausted")]
    ResourceLimit { budget: usize },

    #[error("invalid term order: {0}")]
    InvalidOrder(String),

    #[error("explicit generator {k} differs from the normalized Horn generator: {diff}")]
    MismatchWithNHorn { k: usize, diff: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ideal is the whole ring")]
    ImproperIdeal,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    /// True for errors that mean "ran out of budget" rather than "wrong".
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
