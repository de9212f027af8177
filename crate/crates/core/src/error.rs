use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level {level} shares a factor with the conductor {conductor}")]
    ConductorOverlap { level: u64, conductor: u64 },
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("bad auxiliary prime {0}: a value reduced to zero")]
    BadPrime(u64),
    #[error("κ̃_{n} does not lie in A ⊗ Ĩ_{n}: its image under π_{{n/ℓ}} is nonzero for ℓ = {l}")]
    Landing { n: u64, l: u64 },
    #[error("search bound exceeded: {0}")]
    SearchBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
