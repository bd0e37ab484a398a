use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    ResourceLimit(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::ResourceLimit(_) => 4,
            CliError::Mismatch(_) => 5,
        }
    }
}

impl From<rrfold_core::Error> for CliError {
    fn from(e: rrfold_core::Error) -> Self {
        match e {
            rrfold_core::Error::ResourceLimit(_) => CliError::ResourceLimit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<rrfold_fold::Error> for CliError {
    fn from(e: rrfold_fold::Error) -> Self {
        use rrfold_fold::Error as F;
        match e {
            F::LengthCap { .. } | F::Overflow => CliError::ResourceLimit(e.to_string()),
            F::Core(inner) => inner.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
