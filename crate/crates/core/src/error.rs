use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("lineshape families do not match: {0}")]
    FamilyMismatch(String),

    #[error("intrinsic widths differ between sources ({a} vs {b})")]
    UnequalIntrinsicWidth { a: f64, b: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (|value| ≈ {value:e}, error estimate {error_estimate:e})")]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("tau grid must be strictly increasing and finite")]
    InvalidGrid,

    #[error("curve baseline too short: max |tau| = {max_tau} < {required}")]
    InsufficientBaseline { max_tau: f64, required: f64 },

    #[error("only {samples} samples inside the expected dip width (need 16)")]
    InsufficientResolution { samples: usize },

    #[error("dip never decays to 1/e of its depth at tau = 0 on this grid")]
    DipNotResolved,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}
