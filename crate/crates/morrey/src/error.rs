use thiserror::Error;

#[derive(Debug, Error)]
pub enum MorreyError {
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("window range invalid: a={a} > b={b}")]
    EmptyRange { a: i64, b: i64 },

    #[error("dense enumeration guard exceeded: {0} window evaluations requested (cap 10^8)")]
    GuardExceeded(u128),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index overflow: {0}")]
    IndexOverflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MorreyError>;
