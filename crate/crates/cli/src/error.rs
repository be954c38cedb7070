use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] potlab_core::Error),

    #[error(transparent)]
    Distortion(#[from] potlab_distortion::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Input { path: String, message: String },
}

impl CliError {
    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Input {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
