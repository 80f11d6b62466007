use thiserror::Error;

/// Coarse failure category, used by front-ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown residue symbol '{0}'")]
    UnknownSymbol(char),

    #[error("degenerate solubility table")]
    DegenerateSolubility,

    #[error("degenerate similarity range")]
    DegenerateSimilarity,

    #[error("no CA atoms found")]
    NoCaAtoms,

    #[error("residue {index} ({name}) has no CA atom")]
    MissingCa { index: usize, name: String },

    #[error("transition undefined for isolated vertex {0}")]
    IsolatedVertex(usize),

    #[error("invalid probability vector: entries sum to {0}")]
    InvalidProbability(f64),

    #[error("zero variance in column {0}")]
    ZeroVariance(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) => ErrorKind::Config,
            Error::ZeroVariance(_) | Error::Numeric(_) | Error::DegenerateSimilarity => {
                ErrorKind::Numeric
            }
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
