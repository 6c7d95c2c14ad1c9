use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("{op} did not converge within {cap} steps from element {start}")]
    NonConvergence {
        op: &'static str,
        start: String,
        cap: usize,
    },
    #[error("unknown letter '{0}'")]
    UnknownLetter(char),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("quotient tables are ill-defined: {0}")]
    IllDefined(String),
    #[error("hypothesis unsatisfied: {0}")]
    HypothesisUnsatisfied(String),
    #[error("case analysis reached an impossible branch: {0}")]
    CaseUnreachable(String),
    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
    #[error("invalid JSON document: {0}")]
    Json(String),
    #[error("{0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
