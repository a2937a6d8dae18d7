use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("bound violation: {0}")]
    Violation(String),

    #[error(transparent)]
    Core(#[from] predsearch_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// 0 success, 1 bound or assertion violation, 2 usage or config error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Violation(_) => 1,
            HarnessError::Config(_) | HarnessError::Io { .. } => 2,
            HarnessError::Core(
                predsearch_core::Error::GuessTooSmall { .. }
                | predsearch_core::Error::QueryBudgetExceeded { .. }
                | predsearch_core::Error::Construction(_),
            ) => 1,
            HarnessError::Core(_) => 2,
        }
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::Config(e.to_string())
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
