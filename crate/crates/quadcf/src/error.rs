use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] quadcf_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for bad input, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(_) | Error::Input(_) => 2,
            Error::Io { .. } => 3,
        }
    }

    pub fn io(path: &Path, source: impl Into<io::Error>) -> Self {
        Error::Io { path: path.to_path_buf(), source: source.into() }
    }
}
