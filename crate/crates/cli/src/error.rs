use foldclass_core::ErrorKind;
use thiserror::Error;

/// A failure tagged with the pipeline stage it came from.
#[derive(Debug, Error)]
#[error("{stage}: {message}")]
pub struct CliError {
    pub stage: String,
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(stage: &str, kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError { stage: stage.to_string(), kind, message: message.into() }
    }

    pub fn config(stage: &str, message: impl Into<String>) -> Self {
        CliError::new(stage, ErrorKind::Config, message)
    }

    pub fn data(stage: &str, message: impl Into<String>) -> Self {
        CliError::new(stage, ErrorKind::Data, message)
    }

    /// 2 configuration, 3 data, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Numeric => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub trait Stage<T> {
    fn stage(self, stage: &str) -> CliResult<T>;
}

impl<T> Stage<T> for foldclass_core::Result<T> {
    fn stage(self, stage: &str) -> CliResult<T> {
        self.map_err(|e| CliError::new(stage, e.kind(), e.to_string()))
    }
}

impl<T> Stage<T> for std::io::Result<T> {
    fn stage(self, stage: &str) -> CliResult<T> {
        self.map_err(|e| CliError::data(stage, e.to_string()))
    }
}

impl<T> Stage<T> for serde_json::Result<T> {
    fn stage(self, stage: &str) -> CliResult<T> {
        self.map_err(|e| CliError::data(stage, e.to_string()))
    }
}

impl<T> Stage<T> for csv::Result<T> {
    fn stage(self, stage: &str) -> CliResult<T> {
        self.map_err(|e| CliError::data(stage, e.to_string()))
    }
}
