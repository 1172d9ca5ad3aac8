use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("scene syntax: {0}")]
    SceneSyntax(String),

    #[error("scene: {0}")]
    Scene(String),

    #[error("expression error at position {position}: {message}")]
    Expr { position: usize, message: String },

    #[error("invalid point: {0}")]
    Point(String),

    #[error(transparent)]
    Core(#[from] mfcalc::Error),
}

impl CliError {
    pub(crate) fn expr(position: usize, message: impl Into<String>) -> Self {
        CliError::Expr {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn scene(message: impl Into<String>) -> Self {
        CliError::Scene(message.into())
    }
}
