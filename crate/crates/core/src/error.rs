use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: `{key}` {reason}")]
    Config { key: String, reason: String },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("kernel singularity: {0}")]
    Singularity(String),

    #[error("series did not reach tolerance within {terms} terms (achieved bound {achieved:e}, target {target:e})")]
    Truncation {
        terms: usize,
        achieved: f64,
        target: f64,
    },

    #[error("delayed kernel evaluated within {distance:e} of a pole (mode n = {mode})")]
    NearPole { mode: usize, distance: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (last residual {last:e})")]
    Convergence { iterations: usize, last: f64, history: Vec<f64> },

    #[error("condensate collapse detected: {0}")]
    Instability(String),

    #[error("interaction drives the dispersion imaginary at k = {k:e} 1/m")]
    ImaginaryBranch { k: f64 },

    #[error("complex Newton iteration failed at k = {k:e} 1/m after {iterations} steps (|F| = {residual:e})")]
    RootNotFound {
        k: f64,
        iterations: usize,
        residual: f64,
        trace: Vec<(f64, f64)>,
    },

    #[error("root at k = {k:e} 1/m left the tracked branch: {reason}")]
    Branch { k: f64, reason: String },

    #[error("no positive critical momentum: {0}")]
    DegenerateInteraction(String),

    #[error("low-k dispersion is not linear: fit residual {residual:.3} exceeds {limit:.3}")]
    FitQuality { residual: f64, limit: f64 },

    #[error("scan point {value:e} failed: {source}")]
    ScanPoint { value: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(key: &str, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}
