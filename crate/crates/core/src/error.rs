use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("photon number {requested} exceeds the configured cap of {cap}")]
    Capacity { requested: u32, cap: u32 },

    #[error("state has zero norm")]
    DegenerateState,

    #[error("invalid optical element: {0}")]
    InvalidElement(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no coincidence counts to evaluate")]
    EmptyData,

    #[error("invalid analyzer settings: {0}")]
    InvalidSettings(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("config line {line}, key `{key}`: {reason}")]
    Config {
        line: usize,
        key: String,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
