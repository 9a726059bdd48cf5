use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    Arity { symbol: String, expected: usize, found: usize },

    #[error("signature error: {0}")]
    Signature(String),

    #[error("ill-formed rule `{rule}`: {reason}")]
    IllFormedRule { rule: String, reason: String },

    #[error("expected a ground term, found `{0}`")]
    NonGround(String),

    #[error("unification explored more than {cap} states")]
    StateCap { cap: usize },

    #[error("no normal form within {max_steps} step(s)")]
    StepLimit { max_steps: usize },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Bound exhaustion, as opposed to a malformed request.
    pub fn is_bound_exhausted(&self) -> bool {
        matches!(self, Error::StateCap { .. } | Error::StepLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
