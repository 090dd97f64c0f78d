use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("image {value} at position {index} is outside Z_{n}")]
    OutOfRange { index: usize, value: usize, n: usize },
    #[error("cannot parse function text {0:?}")]
    Parse(String),
    #[error("domain sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{0} is not a bijection")]
    NotBijection(String),
    #[error("{0} is not a functional tree")]
    NotTree(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("labeling is not graceful for {0}")]
    NotGraceful(String),
    #[error("affine combination leaves Z_{n} at input {index} (value {value})")]
    ExpansionOverflow { index: usize, value: i64, n: usize },
    #[error("n = {n} exceeds the exhaustive limit {limit}; enable branch-and-bound")]
    TooLarge { n: usize, limit: usize },
    #[error("singular point: denominator vanishes at ({row}, {col})")]
    SingularPoint { row: usize, col: usize },
    #[error("factor merge conflict: {0}")]
    FactorConflict(String),
    #[error("no qualifying vertex: {0}")]
    NoQualifyingVertex(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
