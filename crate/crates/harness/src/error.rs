use qfrac::QError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed check specification, flag or parameter file.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("sampler region is empty: {accepted} of {wanted} points after {attempts} attempts")]
    EmptyRegion {
        wanted: usize,
        accepted: usize,
        attempts: usize,
    },

    #[error(transparent)]
    Core(#[from] QError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
