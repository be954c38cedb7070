use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] potlab_core::Error),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown scenario kind '{kind}' at {line}:{column}")]
    UnknownKind {
        kind: String,
        line: usize,
        column: usize,
    },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("preimage enumeration is incomplete: {0}")]
    IncompleteEnumeration(String),
    #[error("point {point} has {found} preimages, expected {expected}")]
    PreimageCount {
        point: String,
        expected: usize,
        found: usize,
    },
    #[error("derivative vanishes at {0}")]
    ZeroDerivative(String),
    #[error("map is not finite at {0}")]
    NotFinite(String),
    #[error("image point {0} lies on the marked boundary")]
    ImageOnGamma(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
