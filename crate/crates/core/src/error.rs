use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: line {line} is not valid UTF-8")]
    Encoding { path: PathBuf, line: usize },

    #[error("parallel files differ in length: {source_lines} source lines vs {target_lines} target lines")]
    LineCountMismatch { source_lines: usize, target_lines: usize },

    #[error("corpus of {size} pairs is too small to carve out {needed} held-out pairs")]
    CorpusTooSmall { size: usize, needed: usize },

    #[error("{what}, line {line}: {message}")]
    Parse { what: String, line: usize, message: String },

    #[error("corrupted model stream at byte {offset}: {message}")]
    Binary { offset: usize, message: String },

    #[error("alignment dimensions disagree: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config: {0}")]
    Config(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("network: {0}")]
    Network(String),

    #[error("checksum mismatch for {path}: expected {expected}, got {actual}")]
    Checksum {
        path: PathBuf,
        expected: String,
        actual: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(what: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            what: what.into(),
            line,
            message: message.into(),
        }
    }
}
