use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected 2 node identifiers, found {found}")]
    Parse { line: usize, found: usize },

    #[error("edge list contains no edges")]
    EmptyGraph,

    #[error("line {line}: unknown node identifier `{id}`")]
    UnknownNode { line: usize, id: String },

    #[error("{} node(s) missing from every community: {}", .missing.len(), .missing.join(", "))]
    Coverage { missing: Vec<String> },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("path enumeration exceeded the budget of {budget} extensions")]
    BudgetExceeded { budget: u64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for errors caused by bad input data rather than bad parameters.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::EmptyGraph
                | Error::UnknownNode { .. }
                | Error::Coverage { .. }
                | Error::BudgetExceeded { .. }
                | Error::Io(_)
        )
    }
}
