use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{}: malformed JSON at line {line}, column {column}: {msg}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error("{}: unsupported model version {found}; supported versions: {supported}", path.display())]
    Version {
        path: PathBuf,
        found: String,
        supported: String,
    },
    #[error("{}: corrupt model file: {msg}", path.display())]
    CorruptModel { path: PathBuf, msg: String },
    #[error("{}: inconsistent model: {msg}", path.display())]
    InconsistentModel { path: PathBuf, msg: String },
    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: fds_core::Error },
    #[error("{}: no item is covered by the model vocabulary", path.display())]
    NoCoverage { path: PathBuf },
    #[error(transparent)]
    Core(#[from] fds_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn data(path: impl Into<PathBuf>, source: fds_core::Error) -> Self {
        Error::Data {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, e: &serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            line: e.line(),
            column: e.column(),
            msg: strip_location(e),
        }
    }
}

// serde_json appends " at line L column C" to its messages.
fn strip_location(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}
