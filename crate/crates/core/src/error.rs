use std::fmt;

use thiserror::Error;

use crate::game::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Line and column (both 1-based) inside a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Pos, name: String },
    #[error("{pos}: expected {expected} payoffs, found {found}")]
    ArityMismatch {
        pos: Pos,
        expected: usize,
        found: usize,
    },
    #[error("{pos}: unknown information set `{name}`")]
    UnknownInfoset { pos: Pos, name: String },
    #[error("{pos}: clause `{clause}` cannot hold for any conditional belief")]
    InfeasibleClause { pos: Pos, clause: String },
    #[error("invalid game:\n{0}")]
    Validation(ValidationReport),
    #[error("belief puts mass outside the conditioning event at `{infoset}`")]
    DomainMismatch { infoset: String },
    #[error("the restrictions of {player} admit no conditional belief system")]
    EmptyPolytope { player: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos: Pos { line, column },
            message: message.into(),
        }
    }
}
