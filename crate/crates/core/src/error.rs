use thiserror::Error;

/// Failures raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {got} is too small (need at least {min})")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("input vector is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("probability {mass:e} leaked into the guard band (tolerance {tolerance:e}); increase the dimension")]
    TruncationOverflow { mass: f64, tolerance: f64 },

    #[error("evolution lost unitarity: norm^2 = {norm_sqr}")]
    NormDrift { norm_sqr: f64 },

    #[error("eigenvalue iteration did not converge at index {index}")]
    EigenNoConvergence { index: usize },

    #[error("chain edge reached at t = {t}: end-site probability {mass:e}")]
    EdgeLeak { t: f64, mass: f64 },

    #[error("amplitude series did not reach tolerance before k = {cap}")]
    NonConvergent { cap: usize },

    #[error("exponential decomposition residual {residual:e} exceeds tolerance")]
    DecompositionFailure { residual: f64 },

    #[error("matrix norm {norm} is beyond the supported exponential range")]
    ExponentialOutOfRange { norm: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
