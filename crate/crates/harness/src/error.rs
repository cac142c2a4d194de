use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {field}: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("{0:?} is a random generator and needs --seed")]
    MissingSeed(String),
    #[error("bad source {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("{generator}: no valid space after {attempts} attempts (last error: {last})")]
    GeneratorExhausted { generator: String, attempts: usize, last: lipdense::Error },
    #[error("{points} points exceed the exact-scan limit of {max}")]
    TooManyPoints { points: usize, max: usize },
    #[error("function needs coordinates, but the space was given as a distance matrix")]
    NoCoordinates,
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot plot an empty trace")]
    EmptyTrace,
    #[error("plot {}: {message}", path.display())]
    Plot { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] lipdense::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.to_owned(), source }
    }

    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        HarnessError::Config { field, reason: reason.into() }
    }
}
