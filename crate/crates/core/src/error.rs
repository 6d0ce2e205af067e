use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MqError {
    #[error("division by zero in the coefficient field")]
    DivisionByZero,

    #[error("evaluation pole: denominator vanishes at q = {0}")]
    EvaluationPole(String),

    #[error("generator index ({row},{col}) out of range for n = {n}")]
    IndexOutOfRange { row: i64, col: i64, n: usize },

    #[error("dimension mismatch: {left} vs {right} generators")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree guard exceeded: degree {degree} > limit {limit}")]
    DegreeGuardExceeded { degree: u64, limit: u32 },

    #[error("rewrite depth limit exceeded while straightening")]
    RewriteLimitExceeded,

    #[error("commutation table has no rule for generator pair ({small},{big})")]
    MissingPair { small: usize, big: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("S-pair limit exceeded after {0} pairs")]
    PairLimitExceeded(usize),

    #[error("empty Groebner basis")]
    EmptyBasis,

    #[error("invalid prefix size {s}: must lie in 1..={max}")]
    InvalidPrefix { s: usize, max: usize },
}

impl MqError {
    /// Budget violations (as opposed to mathematical or input errors).
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            MqError::DegreeGuardExceeded { .. }
                | MqError::RewriteLimitExceeded
                | MqError::PairLimitExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, MqError>;
