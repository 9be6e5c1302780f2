use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad magic: expected \"HSCUBE1\", found {0:?}")]
    BadMagic(String),
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("payload truncated: need {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("{extra} bytes after the payload")]
    TrailingData { extra: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{k} endmembers but only {palette} palette colours")]
    TooManyEndmembers { k: usize, palette: usize },
    #[error("pixel {0} has no abundance to normalize")]
    DegeneratePixel(usize),
    #[error("unsupported image: {0}")]
    BadImage(String),
    #[error(transparent)]
    Data(#[from] dgsnmf_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
