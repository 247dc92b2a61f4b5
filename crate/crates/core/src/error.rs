use thiserror::Error;

use crate::kernel::MonadKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("monad mismatch: expected {expected}, found {found}")]
    MonadMismatch { expected: MonadKind, found: MonadKind },

    #[error("state space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("{op} is not defined for the {found} monad")]
    WrongMonad { op: &'static str, found: MonadKind },

    #[error("step function is not monotone (iteration {iteration} shrank the iterate)")]
    NonMonotoneDetected { iteration: usize },

    #[error("system has {states} states, oracle limit is {limit}")]
    TooLarge { states: usize, limit: usize },

    #[error("bad split: {0}")]
    BadSplit(String),

    #[error("word of length {len} has no image under the length-elimination map")]
    LongWord { len: usize },

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },

    #[error("header declares {declared} {what}, found {found}")]
    HeaderMismatch { what: &'static str, declared: usize, found: usize },

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
