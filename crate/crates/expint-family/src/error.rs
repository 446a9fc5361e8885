use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Complete gamma function evaluated at a nonpositive integer.
    #[error("gamma pole: Gamma(a) has a pole at nonpositive integer a = {0}")]
    GammaPole(f64),

    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameter triple outside the existence region of the integral.
    #[error(
        "inadmissible parameters: (lambda={lambda}, mu={mu}, nu={nu}) requires lambda > {bound}"
    )]
    Inadmissible {
        lambda: f64,
        mu: f64,
        nu: f64,
        bound: f64,
    },

    /// The one-step reduced form needs lambda > mu - 1.
    #[error("side condition violated: reduced form requires lambda > mu - 1 (lambda={lambda}, mu={mu})")]
    SideCondition { lambda: f64, mu: f64 },

    /// Recursion depth beyond the supported order range.
    #[error("unsupported order: recursion depth {0} exceeds the supported range (|order| ~ 50)")]
    Unsupported(usize),

    /// Quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: best value {value}, error estimate {err_estimate}")]
    NoConvergence { value: f64, err_estimate: f64 },

    /// The integral diverges for the given parameters.
    #[error("divergent integral: {0}")]
    Divergent(String),
}

impl Error {
    fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn domain_err(msg: impl Into<String>) -> Error {
    Error::domain(msg)
}
