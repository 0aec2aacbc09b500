use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported order: p = {p} (boundary closures are derived for p <= {max})")]
    UnsupportedOrder { p: usize, max: usize },

    #[error("degenerate polynomial: leading coefficient is numerically zero")]
    DegeneratePolynomial,

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("singular frequency: omega must be nonzero")]
    SingularFrequency,

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("time integration diverged (NaN/Inf) at t = {t}")]
    Divergence { t: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
