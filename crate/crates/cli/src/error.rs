use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failures that map to exit code 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("{path}: {inner}")]
    InFile { path: PathBuf, inner: Box<CliError> },
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub(crate) fn in_file(self, path: &Path) -> Self {
        CliError::InFile { path: path.to_path_buf(), inner: Box::new(self) }
    }
}
