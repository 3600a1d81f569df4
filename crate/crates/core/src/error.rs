use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The caller handed us something outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the tolerance.
    #[error("quadrature did not converge on {context}: estimate {estimate:e} > tol {tol:e} after {subdivisions} subdivisions")]
    Quadrature {
        context: String,
        estimate: f64,
        tol: f64,
        subdivisions: usize,
    },

    /// Square-root continuation could not resolve the branch along a path.
    #[error("branch continuation failed near {near}: {reason}")]
    Continuation { near: String, reason: String },

    /// A linear-algebra step was too badly conditioned to trust.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    /// A computed result failed its own postcondition.
    #[error("postcondition failed: {0}")]
    Postcondition(String),

    /// Exact polynomial division left a remainder where none is possible.
    #[error("exact division failed: {0}")]
    ExactDivision(String),

    /// Sign transport over the tracing lattice disagreed around a plaquette.
    #[error("sign transport inconsistent around plaquette ({0}, {1})")]
    Plaquette(usize, usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True when the failure is the caller's fault rather than a numerical one.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}
