use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid recurrence parameters: {0}")]
    InvalidParams(String),
    #[error("invalid range: lo = {lo} > hi = {hi}")]
    Range { lo: i64, hi: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular denominator: {0}")]
    SingularDenominator(String),
    #[error("size {got} exceeds the supported maximum of {max} for {what}")]
    Size {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
