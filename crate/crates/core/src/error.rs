use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },

    #[error("quadrature did not converge: estimated error {err_est:.3e} exceeds tolerance {tol:.3e}")]
    NonConverged { err_est: f64, tol: f64 },

    #[error("invalid quadrature specification: {0}")]
    InvalidSpec(String),

    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: String },

    #[error("boundary points coincide (chordal distance {distance:.3e}); the diagonal is excluded")]
    Diagonal { distance: f64 },

    #[error("operation is only available for the {expected} model")]
    UnsupportedModel { expected: &'static str },

    #[error("pole of the c-function at lambda = 0")]
    Pole,

    #[error("invalid boundary distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function has unbounded support: {0}")]
    UnboundedSupport(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
