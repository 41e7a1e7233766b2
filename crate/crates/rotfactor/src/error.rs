use std::io;
use std::path::PathBuf;

use rotfactor_core::Error as CoreError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// Semantic error at a dotted field path.
    #[error("config error at {field}: {message}")]
    Config { field: String, message: String },

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("oracle mismatch in {check}: {detail}")]
    Oracle { check: String, detail: String },

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    /// 0 success, 2 configuration, 3 insufficient window, 4 invariant or
    /// oracle failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Read { .. } | Error::ConfigParse(_) | Error::Config { .. } => 2,
            Error::Core(e) => match e {
                CoreError::WindowTooSmall(_)
                | CoreError::NotGenerated(_)
                | CoreError::Unreachable(_)
                | CoreError::EmptyFirstReturns => 3,
                CoreError::Invariant(_) | CoreError::Overflow => 4,
                _ => 2,
            },
            Error::Oracle { .. } | Error::Write { .. } | Error::Serialize(_) => 4,
        }
    }
}
