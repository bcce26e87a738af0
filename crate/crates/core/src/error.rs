use thiserror::Error;

/// Errors raised by the library and surfaced by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range ({len} members)")]
    Index { index: usize, len: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate center {center:?}: already blown up (chart {chart})")]
    DegenerateCenter { center: Vec<String>, chart: usize },

    #[error("lift of center {center:?} is not a coordinate locus in chart {chart}")]
    NotCoordinate { center: Vec<String>, chart: usize },

    #[error("not a b-map: {0}")]
    NotBMap(String),

    #[error("{path}: {reason}")]
    Document { path: String, reason: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn doc(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Document {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
