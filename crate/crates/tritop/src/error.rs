use thiserror::Error;

/// Errors produced by the library. The CLI maps each variant to a
/// distinct process exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("singular matrix: a_0 = 0")]
    Singular,

    #[error("newton iteration did not converge: residual {residual:e} exceeds tolerance {tol:e}")]
    Convergence { residual: f64, tol: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::InsufficientData(_) => 2,
            Error::Singular => 3,
            Error::Convergence { .. } => 4,
            Error::Io(_) | Error::Json(_) => 5,
        }
    }

    /// Short machine-readable tag for error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::Singular => "singular",
            Error::Convergence { .. } => "convergence",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
