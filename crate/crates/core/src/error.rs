use thiserror::Error;

use crate::automaton::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid DES: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("state-space limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error(
        "oracle inconclusive: search was truncated at string length {max_len} \
         before saturating; a violation may exist beyond the bound"
    )]
    Inconclusive { max_len: usize },

    #[error("name collision: `{0}` already exists")]
    NameCollision(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("alphabet overlap on `{0}`")]
    AlphabetOverlap(String),

    #[error("invalid event code: {0}")]
    Encoding(String),

    #[error("invalid step bound `{0}`: expected decimal digits without leading zeros or `inf`")]
    StepBound(String),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
