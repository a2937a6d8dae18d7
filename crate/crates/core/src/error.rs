use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("net construction needs {count}+ lattice candidates, cap is {cap}")]
    CandidateCapExceeded { count: usize, cap: usize },

    #[error("net is empty")]
    EmptyNet,

    #[error("query history is empty")]
    EmptyHistory,

    #[error("trilateration system is singular")]
    SingularSystem,

    #[error("query budget of {limit} exhausted")]
    QueryBudgetExceeded { limit: usize },

    #[error("guessed prediction factor {c_guess} is smaller than the true factor")]
    GuessTooSmall { c_guess: f64 },

    #[error("prediction at the step origin must be positive, got {0}")]
    NonPositivePrediction(f64),

    #[error("outside theorem hypothesis: {0}")]
    Hypothesis(String),

    #[error("internal construction failure: {0}")]
    Construction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
