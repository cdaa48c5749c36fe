use thiserror::Error;

/// Errors raised by the series engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("adjacency matrix singular")]
    SingularMatrix,
    #[error("enumeration requires negative-definite form")]
    NotNegativeDefinite,
    #[error("{0}")]
    Precondition(String),
    #[error("invalid timelike pair: {0}")]
    InvalidCone(String),
    #[error("slope not admissible for available data: {0}")]
    SlopeNotAdmissible(String),
    #[error("increase series order: {0}")]
    TailBound(String),
    #[error("divergent constant term: periodic coefficients are not mean-zero")]
    DivergentConstantTerm,
    #[error("phase bookkeeping left a non-rational residual at {0}")]
    NonRationalPhase(String),
    #[error("knot data carries no Alexander polynomial")]
    MissingAlexander,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
