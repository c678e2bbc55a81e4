use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartanMatrix(String),
    #[error("invalid realization: {0}")]
    InvalidRealization(String),
    #[error("parabolic subset {0:?} is not of finite type")]
    NotFiniteType(Vec<usize>),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("exact division failed: {0}")]
    DivisionFailure(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("bimodules live on different sides or realizations")]
    SideMismatch,
    #[error("degree bound {bound} too small: {detail}")]
    DegreeBoundExceeded { bound: i32, detail: String },
    #[error("decomposition failed: {0}")]
    NotDecomposable(String),
    #[error("word {word:?} exceeds length bound {bound}")]
    LengthBoundExceeded { word: Vec<usize>, bound: usize },
    #[error("weight does not equal degree on the equivariant side: {0}")]
    WeightLock(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("{0} is not a minimal coset representative")]
    NotMinimal(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
