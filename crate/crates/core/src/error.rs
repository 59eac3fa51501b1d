use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("invalid edge {{{0},{1}}}")]
    InvalidEdge(usize, usize),
    #[error("not a matching: {0}")]
    NotAMatching(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("enumeration limit exceeded: 2n = {size} > {limit}")]
    LimitExceeded { size: usize, limit: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
