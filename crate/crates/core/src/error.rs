use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{0:?} is not a basis")]
    NotABasis(Vec<usize>),

    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid pasture: {0}")]
    InvalidPasture(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("source pasture is not generated by its fundamental elements and epsilon")]
    NotGeneratedByFundamentalElements,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether this is a parse/decoding failure rather than a domain error.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Json(_))
    }
}
