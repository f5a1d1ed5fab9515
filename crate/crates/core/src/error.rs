use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("syntax error at byte {offset}: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<String>,
    },

    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),

    #[error("no binding for variable `{0}`")]
    MissingBinding(String),

    #[error("{what}: limit {limit}, requested {requested}")]
    CapExceeded {
        what: String,
        limit: usize,
        requested: usize,
    },

    #[error("general frame is not tight: N({point}) contains non-admissible set {set}")]
    NotTight { point: usize, set: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, limit: usize, requested: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            limit,
            requested,
        }
    }

    /// True for errors caused by a size or resource limit.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
