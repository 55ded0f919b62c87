use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("possibly infinite filling: step cap {cap} exceeded{}", witness.as_ref().map(|w| format!(" (shape is linear along b = {w})")).unwrap_or_default())]
    PossiblyInfinite { cap: usize, witness: Option<String> },
    #[error("size limit exceeded: {what} has {size} > {limit}; use shape-specific rank")]
    SizeLimit { what: &'static str, size: usize, limit: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}
