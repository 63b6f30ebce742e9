use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scale must be nonzero")]
    InvalidScale,
    #[error("division by a set containing 0")]
    DivisionDomain,
    #[error("infeasible family spec: {0}")]
    InfeasibleSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
