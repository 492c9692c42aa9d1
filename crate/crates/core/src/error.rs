use thiserror::Error;

/// Errors produced by the measure, moment, velocity and energy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VortexError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Adaptive quadrature ran out of budget before meeting its tolerance.
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("evaluation point ({re}, {im}) lies within {distance:e} of the measure support")]
    Proximity { re: f64, im: f64, distance: f64 },

    /// An atom sits on (or numerically on) the circle |z| = r.
    #[error("radius {r} is singular for this measure (atom at modulus {modulus})")]
    SingularRadius { r: f64, modulus: f64 },

    #[error("singular configuration: {0}")]
    SingularConfiguration(&'static str),

    #[error("integral diverges: {0}")]
    Divergent(&'static str),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("{0}")]
    Io(String),

    #[error("parse error at {position}: {message} (token `{token}`)")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, VortexError>;

pub(crate) fn require(
    cond: bool,
    name: &'static str,
    value: f64,
    reason: &'static str,
) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(VortexError::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
