use crate::search::SearchError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("illegal {game} move: {reason}")]
    IllegalMove { game: &'static str, reason: String },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("rejection sampling gave up after {0} attempts")]
    RejectionLimit(usize),
    #[error("expected {expected} outcomes, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Metric(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
