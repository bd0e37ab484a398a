use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence pair of total length {len} exceeds the cap {cap}")]
    LengthCap { len: usize, cap: usize },
    #[error("invalid nucleotide {ch:?} at position {pos} of strand {strand}")]
    InvalidAlphabet { strand: char, ch: char, pos: usize },
    #[error("partition function overflows double precision")]
    Overflow,
    #[error("operation needs tables filled with the Boltzmann semiring")]
    RequiresPartitionTables,
    #[error("energy configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(rrfold_core::Error),
}

impl From<rrfold_core::Error> for Error {
    fn from(e: rrfold_core::Error) -> Self {
        match e {
            rrfold_core::Error::InvalidNucleotide { strand, ch, pos } => {
                Error::InvalidAlphabet { strand, ch, pos }
            }
            other => Error::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
