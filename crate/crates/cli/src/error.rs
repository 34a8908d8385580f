use thiserror::Error;

/// Process exit status for each failure class.
pub const EXIT_INVALID_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("alpha={alpha}, beta={beta}, t={t}, dim={dim}: {source}")]
    Numerical {
        alpha: f64,
        beta: f64,
        t: f64,
        dim: usize,
        #[source]
        source: krylov_core::Error,
    },

    #[error("non-finite value for {observable} at t={t}")]
    NonFinite { observable: String, t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_INVALID_CONFIG,
            CliError::Numerical { .. } | CliError::NonFinite { .. } | CliError::Json(_) => EXIT_NUMERICAL,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
