use thiserror::Error;

/// Errors raised by the geometry kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("half-plane intersection is unbounded")]
    Unbounded,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("target unreachable: {0}")]
    Unreachable(String),
    #[error("target functional is not monotone in the free parameter")]
    NonMonotone,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("no root of g(t) = pi t^2 on the domain")]
    NoRoot,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        // serde_json messages carry line/column suffixes; keep only the category and the cause text
        let msg = e.to_string();
        let msg = match msg.find(" at line ") {
            Some(i) => msg[..i].to_string(),
            None => msg,
        };
        let kind = match e.classify() {
            serde_json::error::Category::Io => "io",
            serde_json::error::Category::Syntax => "syntax",
            serde_json::error::Category::Data => "data",
            serde_json::error::Category::Eof => "eof",
        };
        Error::Json(format!("{kind}: {msg}"))
    }
}
