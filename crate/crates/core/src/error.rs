use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{key}`: {message}")]
    InvalidParameter { key: String, message: String },

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),

    #[error("negative input where a nonnegative value is required: {0}")]
    Negative(String),

    #[error("operation not supported in {mode} mode: {what}")]
    UnsupportedMode { mode: &'static str, what: String },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("solver instability at t = {t}: {reason}")]
    Instability { t: f64, reason: String },

    #[error("conjugate gradient did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("zero denominator while evaluating `{0}`")]
    ZeroDenominator(String),

    #[error("field shape mismatch: {0}")]
    Shape(String),

    #[error("could not parse `{0}` as a rational number")]
    Rational(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            message: message.into(),
        }
    }
}
