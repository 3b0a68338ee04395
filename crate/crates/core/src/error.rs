use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid state space: {0}")]
    InvalidSpace(String),
    #[error("move is not applicable to this table")]
    MoveNotApplicable,
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("unsupported levels: {0}")]
    UnsupportedLevels(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("incompatible dimensions: {0}")]
    Incompatible(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("fiber has more than {0} elements")]
    FiberTooLarge(usize),
    #[error("missing facets for interior-point mode")]
    MissingFacets,
    #[error("invalid witness move: {0}")]
    InvalidWitnessMove(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("latin squares: {0}")]
    Latin(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("json: {0}")]
    Json(String),
    #[error("arithmetic overflow in exact computation")]
    Overflow,
}

impl Error {
    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidState(_) => "invalid-state",
            Error::InvalidSpace(_) => "invalid-space",
            Error::MoveNotApplicable => "move-not-applicable",
            Error::InvalidMove(_) => "invalid-move",
            Error::UnsupportedLevels(_) => "unsupported-levels",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::InvalidPartition(_) => "invalid-partition",
            Error::Incompatible(_) => "incompatible",
            Error::TooLarge(_) => "too-large",
            Error::FiberTooLarge(_) => "fiber-too-large",
            Error::MissingFacets => "missing-facets",
            Error::InvalidWitnessMove(_) => "invalid-witness-move",
            Error::Unsupported(_) => "unsupported",
            Error::Latin(_) => "latin",
            Error::Usage(_) => "usage",
            Error::Json(_) => "json",
            Error::Overflow => "overflow",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
