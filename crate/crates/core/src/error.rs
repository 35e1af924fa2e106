use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{func}: pole at {at}")]
    Pole { func: &'static str, at: String },
    #[error("{func}: argument outside domain: {msg}")]
    Domain { func: &'static str, msg: String },
    #[error("{func}: no convergence: {msg}")]
    Convergence { func: &'static str, msg: String },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("unsupported weight {0}: only 12, 16, 18, 20, 22, 26 are available")]
    UnsupportedWeight(u32),
    #[error("{func}: index out of range: {msg}")]
    Range { func: &'static str, msg: String },
    #[error("parameters outside the identity's region: {0}")]
    Region(String),
    #[error("malformed q-expansion cache: {0}")]
    CacheFormat(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in report error blocks.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Domain { .. } => "domain",
            Error::Convergence { .. } => "convergence",
            Error::Resource(_) => "resource",
            Error::UnsupportedWeight(_) => "unsupported-weight",
            Error::Range { .. } => "range",
            Error::Region(_) => "region",
            Error::CacheFormat(_) => "cache-format",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn pole(func: &'static str, at: impl std::fmt::Display) -> Self {
        Error::Pole {
            func,
            at: at.to_string(),
        }
    }

    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn convergence(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Convergence {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn range(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Range {
            func,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
