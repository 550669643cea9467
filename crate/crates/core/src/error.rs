use thiserror::Error;

/// Errors produced by the photostat library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Iterative construction could not reach the requested tail bound.
    #[error("no convergence after growing truncation to {dim}: achieved tail mass {achieved:e}, requested {requested:e}")]
    Convergence {
        dim: usize,
        achieved: f64,
        requested: f64,
    },

    /// Requested (mean, variance) pair is not reachable by a displaced squeezed state.
    #[error("variance {variance} is not attainable at mean {mean}: attainable range is [{min}, {max}]")]
    Infeasible {
        mean: f64,
        variance: f64,
        min: f64,
        max: f64,
    },

    /// Confidence level exceeds the probability mass carried by the distribution.
    #[error("confidence level {alpha} exceeds the available probability mass {mass} (deficit {deficit:e})")]
    Unsatisfiable { alpha: f64, mass: f64, deficit: f64 },

    /// An operation's precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
