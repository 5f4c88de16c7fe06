use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A state parameterization violates positivity. `constraint` names the
    /// violated inequality (or eigenvalue) and `value` is its actual value.
    #[error("non-physical state: {constraint} is {value:.6e}, must be >= 0")]
    NonPhysical { constraint: String, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Clamps round-off negatives (down to −1e-12) to zero.
pub(crate) fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -1e-12 {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("{what} evaluated to {value:e}")))
    }
}
