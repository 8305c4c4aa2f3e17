use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: String, actual: String },

    #[error("invalid label: {0}")]
    Label(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("binary format: {0}")]
    Format(String),

    #[error("binary format: stream truncated while reading {0}")]
    Truncated(&'static str),

    #[error("pipeline config: {path}: {message}")]
    Config { path: String, message: String },

    #[error("unknown pipeline code `{code}` (valid codes: {valid})")]
    UnknownPipeline { code: String, valid: String },

    #[error("unknown dataset `{0}` in the archive metadata table")]
    UnknownDataset(String),

    #[error("resample: {0}")]
    Resample(String),

    #[error("statistics: {0}")]
    Stats(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
