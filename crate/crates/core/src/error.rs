use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is shared by two arcs")]
    SharedVertex(usize),
    #[error("value {value} outside the allowed range {range}")]
    OutOfRange { value: usize, range: String },
    #[error("bad backbone partition: {0}")]
    BadPartition(String),
    #[error("{0} backbones given, at most two are supported")]
    TooManyBackbones(usize),
    #[error("operation requires exactly two backbones")]
    NotTwoBackbones,
    #[error("unbalanced bracket at position {0}")]
    UnbalancedBrackets(usize),
    #[error("crossing graph needs more than four bracket layers")]
    LayerOverflow,
    #[error("unexpected character {ch:?} at position {pos}")]
    InvalidCharacter { ch: char, pos: usize },
    #[error("invalid nucleotide {ch:?} at position {pos} of strand {strand}")]
    InvalidNucleotide { strand: char, ch: char, pos: usize },
    #[error("sequence pair has no nucleotides")]
    EmptySequence,
    #[error("diagram has no irreducible two-backbone shadow")]
    NoExteriorIrreducible,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
