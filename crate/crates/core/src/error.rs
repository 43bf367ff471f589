use thiserror::Error;

/// Errors raised by the point-model evaluators.
///
/// Singular configurations are reported as typed variants so that callers can
/// tell a contour singularity apart from a numerical failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inconsistent momentum: k^2 = {got} does not match energy {expected}")]
    Inconsistent { expected: f64, got: f64 },

    #[error("evaluation point at the origin, where the Green function is singular")]
    Singularity,

    #[error("contour singularity at energy {energy}, alpha {alpha}: |lambda| = {radius}")]
    ContourSingularity {
        energy: f64,
        alpha: f64,
        radius: f64,
    },

    #[error("real exceptional point: energy {energy} equals |E1| for alpha {alpha}")]
    ExceptionalPoint { energy: f64, alpha: f64 },

    #[error("finite-N resonance: 1 + eps(N) D_N vanishes at N = {cutoff}")]
    Resonance { cutoff: f64 },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("extrapolation did not converge: last change {change:e}")]
    Extrapolation { change: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for the variants that describe a singular input rather than a
    /// numerical or usage failure.
    pub fn is_singular_input(&self) -> bool {
        matches!(
            self,
            Error::Singularity
                | Error::ContourSingularity { .. }
                | Error::ExceptionalPoint { .. }
                | Error::Resonance { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
