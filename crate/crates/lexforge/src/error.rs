use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] lexforge_core::Error),
    #[error("oracle unreachable: {0}")]
    OracleUnreachable(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 configuration, 3 input/output, 4 oracle.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Core(lexforge_core::Error::InvalidArgument(_)) => 2,
            Error::Io { .. } | Error::Parse { .. } | Error::Core(_) => 3,
            Error::OracleUnreachable(_) => 4,
        }
    }
}
