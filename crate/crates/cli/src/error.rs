use std::io;
use std::path::Path;

use thiserror::Error;

use crate::expr::ExprError;

/// Everything here maps to exit code 2; failed checks are reported separately.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Usage(String),

    #[error("in `{text}`: {source}")]
    Expr { text: String, source: ExprError },

    #[error(transparent)]
    Core(#[from] microlocal_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
