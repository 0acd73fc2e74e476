use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("undecided clustering at {precision} bits: {detail}")]
    UndecidedClustering { precision: u64, detail: String },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("floor undecided at n = {n} ({precision} bits)")]
    FloorUndecided { n: u64, precision: u64 },
    #[error("refused: {0}")]
    Refused(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
