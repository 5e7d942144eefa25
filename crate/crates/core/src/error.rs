use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing table: {0}")]
    MissingTable(PathBuf),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: PathBuf,
        line: u64,
        message: String,
    },

    #[error("unknown company id `{0}`")]
    Reference(String),

    #[error("company has neither a website nor a twitter handle")]
    EmptyQuery,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("`{0}` contains no letters")]
    NotAWord(String),

    #[error("undefined: {0}")]
    Undefined(&'static str),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("degenerate training set: {0}")]
    DegenerateTraining(String),

    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("{context}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(file: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for failures caused by the filesystem rather than by the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::MissingTable(_))
    }
}
