use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: self-loop on actor `{actor}`")]
    SelfLoop { line: usize, actor: String },

    #[error("line {line}: cannot parse `{content}`")]
    Parse { line: usize, content: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{statistic} is undefined: {reason}")]
    Undefined {
        statistic: &'static str,
        reason: &'static str,
    },

    #[error("log target returned NaN")]
    NanTarget,

    #[error("chain {chain} failed at iteration {iteration}: {source}")]
    Kernel {
        chain: usize,
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
