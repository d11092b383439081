use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate cut-off: {0}")]
    DegenerateCutoff(String),

    #[error("invalid function spec: {0}")]
    FunctionSpec(String),

    #[error("too many dropped replications at n = {n}: {dropped} of {reps}")]
    TooManyDrops { n: usize, dropped: usize, reps: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
