use thiserror::Error;

/// Errors raised by kernel construction, quadrature and norm estimation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder failed to converge for node {index} after {iterations} iterations")]
    Convergence { index: usize, iterations: usize },

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("spectral parameter within {distance:e} of eigenvalue squared at degree {k}")]
    SpectrumHit { k: usize, distance: f64 },

    #[error("damping |mu| = {mu} too small for T_max = {t_max}; need T_max >= {required}")]
    InsufficientDamping { mu: f64, t_max: f64, required: f64 },

    #[error("ill-conditioned amplitude extraction at d = {0}")]
    IllConditioned(f64),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
