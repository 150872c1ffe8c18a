use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Inputs that are individually valid but do not belong together
    /// (e.g. a tensor built for a different basis).
    #[error("configuration mismatch: {0}")]
    Configuration(String),

    #[error("eigensolver did not converge (best residual {residual:.3e}): {message}")]
    Solver { message: String, residual: f64 },

    /// The grid does not contain the wavefunction.
    #[error("grid domain too small: {0}")]
    Domain(String),

    /// Imaginary-time energy went up; the step is too large.
    #[error("time step too large: {0}")]
    Step(String),

    /// A computed object violates an invariant it should satisfy by construction.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
