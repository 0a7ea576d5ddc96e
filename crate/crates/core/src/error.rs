use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("structure too large: {0}")]
    TooLarge(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("network has a cycle through node {0}")]
    Cycle(String),
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("duplicate id: {0}")]
    Duplicate(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("module is not faithful")]
    NotFaithful,
    #[error("map is not a ring homomorphism")]
    InvalidHom,
    #[error("search bound exceeded: {0}")]
    SearchBound(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
