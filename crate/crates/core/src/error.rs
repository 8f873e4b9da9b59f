use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Syntax(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("operands belong to different graphs")]
    MismatchedGraphs,

    #[error("not a separation: {0}")]
    NotASeparation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("not representable: {0}")]
    NonRepresentable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
