use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity {0} is outside 1..=16")]
    ArityOutOfRange(usize),

    #[error("family parameter {0} is outside 1..=8")]
    ParameterOutOfRange(usize),

    #[error("row {row} does not fit arity {arity}")]
    InvalidRow { row: String, arity: usize },

    #[error("duplicate relation name `{0}`")]
    DuplicateRelation(String),

    #[error("relation `{0}` is redefined with a different tuple set")]
    ConflictingRelation(String),

    #[error("constraint language is empty")]
    EmptyLanguage,

    #[error("constraint over `{relation}` lists {got} variables, arity is {expected}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        got: usize,
    },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{0}` is not part of the constraint language")]
    ForeignRelation(String),

    #[error("variable `{0}` is not in the universe")]
    UnknownVariable(String),

    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),

    #[error("guard exceeded: {what} is {size}, limit is {limit}")]
    Guard {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("formula is unsatisfiable")]
    Unsatisfiable,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("assignment is not a model of the {0} formula")]
    NotAModel(&'static str),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown co-clone `{0}`")]
    InvalidCoClone(String),

    #[error("no labeled co-clone contains the language")]
    NoCoClone,

    #[error("no reduction chain for {0}")]
    NoChain(String),

    #[error("`{0}` is not a hypothesis")]
    NotAHypothesis(String),

    #[error("abduction problem has no solution")]
    NoSolution,

    #[error("abduction theory is inconsistent")]
    InconsistentTheory,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn guard(what: &'static str, size: u128, limit: u128) -> Self {
        Error::Guard { what, size, limit }
    }
}
