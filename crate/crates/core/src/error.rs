use thiserror::Error;

/// Errors raised by the group, retraction, solver and optimizer layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not skew-symmetric (symmetric part {deviation:.3e})")]
    NotSkew { deviation: f64 },

    #[error("matrix is not a rotation (orthogonality defect {defect:.3e}, det {det:.6})")]
    NotRotation { defect: f64, det: f64 },

    #[error("{what} is singular at this point")]
    Singularity { what: &'static str },

    #[error("{what}: argument {value:.6e} outside domain (limit {limit:.6e})")]
    Domain {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("non-finite {what} at step {step}")]
    NonFinite { what: &'static str, step: usize },

    #[error("step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        match self {
            e @ (Error::Step { .. } | Error::NonFinite { .. }) => e,
            e => Error::Step {
                step,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, unwrapping any step context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
