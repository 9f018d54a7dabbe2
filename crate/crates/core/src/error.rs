use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A transcendental system has no root in the admissible range. For the
    /// delta-shell this is physics (the repulsive existence threshold), not a
    /// numerical failure.
    #[error("no solution: {reason}")]
    NoSolution { reason: String },

    #[error("no sign change of the target function on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("solver did not converge: {detail}")]
    NonConvergence { detail: String, trace: Vec<String> },

    #[error("contour passes within {min_modulus:e} of a zero")]
    ContourTooClose { min_modulus: f64 },

    #[error("solution blew up at x = {position}")]
    Overflow { position: f64 },

    #[error("grid step {h} is coarser than the allowed {max}")]
    GridTooCoarse { h: f64, max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite, got {value}"))
    }
}
