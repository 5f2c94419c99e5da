use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("m2 = {m2} is below the bound m1(2*m1 - 1) = {min} required for m1 = {m1}")]
    BelowBound { m1: usize, m2: usize, min: usize },

    #[error("t = {given} is inconsistent with m1 + m2 = {m} (expected t = {expected})")]
    InconsistentT { given: u8, m: usize, expected: u8 },

    #[error("parity obstruction: {0}")]
    Parity(String),

    #[error("beyond supported capability: {0}")]
    Capability(String),

    #[error("search exhausted without a result: {0}")]
    Exhausted(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("constructed output failed verification: {0}")]
    Unverified(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
