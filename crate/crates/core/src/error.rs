use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),

    /// An exhaustive oracle was asked to work above its size guard.
    #[error("capacity error: {what} is {actual}, limit is {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// A documented precondition on parameters does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An operation was called before the state it needs exists.
    #[error("state error: {0}")]
    State(String),

    /// An internal invariant of a constructed object is broken.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A search exhausted its space or budget without a solution.
    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),

    /// The drawing certificate did not hold.
    #[error("drawing error: {0}")]
    Drawing(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
