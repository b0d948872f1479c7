use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("refused: {0}")]
    Inexact(String),
    #[error("{0}")]
    Core(koszul_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 3,
            CliError::Inexact(_) => 2,
            CliError::Validation(_) | CliError::Core(_) => 1,
        }
    }
}

impl From<koszul_core::Error> for CliError {
    fn from(e: koszul_core::Error) -> Self {
        use koszul_core::Error as E;
        match e {
            E::Inexact(m) | E::Divergent(m) | E::NonTerminating(m) => CliError::Inexact(m),
            E::Parse(m) => CliError::Parse(m),
            e => CliError::Core(e),
        }
    }
}
