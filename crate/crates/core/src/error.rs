use thiserror::Error;

/// Errors raised by graph, morphism and sequence operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex token `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex token `{0}`")]
    DuplicateVertex(String),

    #[error("edge ({0}, {1}) references an undeclared vertex")]
    DanglingEdge(String, String),

    #[error("map is not total: vertex `{0}` has no image")]
    NonTotalMap(String),

    #[error("map assigns `{0}` more than once")]
    DuplicateAssignment(String),

    #[error("{what}: search budget of {limit} exceeded after {explored} steps ({found} found so far)")]
    BudgetExceeded {
        what: String,
        limit: usize,
        explored: usize,
        found: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a chordless cycle: {0}")]
    NotACycle(String),

    #[error("no amalgam found within budget: {0}")]
    NoAmalgam(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn budget(what: impl Into<String>, limit: usize, explored: usize, found: usize) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
            explored,
            found,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
