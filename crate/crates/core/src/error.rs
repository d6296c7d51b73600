use thiserror::Error;

/// Errors raised by model construction and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown catalog id `{0}`")]
    UnknownModel(String),

    #[error("unknown potential family `{0}`")]
    UnknownPotential(String),

    #[error("quadrature did not converge (estimated residual {residual:e})")]
    Quadrature { residual: f64 },

    #[error("density is singular at the origin")]
    SingularDensity,

    #[error("integrability time undetermined: {0}")]
    Undetermined(String),

    #[error(
        "aliasing check failed: e^(-t psi) = {tail:e} at the Nyquist frequency; increase N or t"
    )]
    Aliasing { tail: f64 },

    #[error("negative values beyond the ringing guard (min/max = {ratio:e})")]
    Ringing { ratio: f64 },

    #[error("did not converge after {iterations} iterations: {reason}")]
    NonConvergence { iterations: usize, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("empty window")]
    EmptyWindow,

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
