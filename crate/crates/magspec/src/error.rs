use magspec_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 config, 3 non-convergence, 4 precondition, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::NoConvergence(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Output(_) => 1,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::InvalidGrid(_)
                | Error::InvalidPotential(_)
                | Error::MissingPotential
                | Error::GridTooCoarse { .. }
                | Error::GridMisaligned
                | Error::DimensionTooSmall { .. } => 2,
                Error::NoConvergence(_)
                | Error::BreakdownUnrecoverable
                | Error::SolveFailed(_)
                | Error::QuadratureUnderResolved { .. } => 3,
                _ => 4,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
