use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported species `{0}`")]
    UnsupportedSpecies(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("tensor archive: {0}")]
    Archive(String),

    #[error("bad tensor archive header: expected magic `ALCH1`")]
    MagicMismatch,

    #[error("shape mismatch for {name}: expected {expected:?}, found {found:?}")]
    Shape {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("sites {0} and {1} coincide")]
    CoincidentSites(usize, usize),

    #[error("overlap matrix has no eigenvalue above threshold {threshold:e}")]
    DegenerateBasis { threshold: f64 },

    #[error("requested {requested} active orbitals but only {available} are available")]
    ActiveSpaceTooLarge { requested: usize, available: usize },

    #[error("{qubits} qubits exceeds the capacity limit of {limit}")]
    Capacity { qubits: usize, limit: usize },

    #[error("invalid alchemical weights: {0}")]
    InvalidWeights(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for malformed-input errors (as opposed to numerical ones).
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Io { .. }
                | Error::Archive(_)
                | Error::MagicMismatch
                | Error::Shape { .. }
                | Error::UnsupportedSpecies(_)
                | Error::Config(_)
        )
    }
}
