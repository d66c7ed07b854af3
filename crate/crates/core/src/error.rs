use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid resolves only {found} modes inside ω₀ ± 5γ (need at least {required})")]
    UnresolvedResonance { found: usize, required: usize },

    #[error("no stationary solution for an uncharged oscillator (e = 0)")]
    NoStationarySolution,

    #[error("susceptibility has a pole at ω = ω₀ when the damping vanishes")]
    ResonancePole,

    #[error("mode {index} has zero frequency; the vector potential is undefined")]
    ZeroFrequencyMode { index: usize },

    #[error("quadrature did not converge: error {achieved:.3e} > tolerance {requested:.3e} after {intervals} intervals")]
    NonConvergence {
        achieved: f64,
        requested: f64,
        intervals: usize,
    },

    #[error("integrator unstable at t = {time}: energy grew from {initial:.6e} to {current:.6e} without a bath")]
    Instability {
        time: f64,
        initial: f64,
        current: f64,
    },

    #[error("non-finite state at t = {time}")]
    NonFinite { time: f64 },

    #[error("position grid too coarse: normalization {norm:.9} deviates from 1 by more than {tolerance:e}")]
    GridTooCoarse { norm: f64, tolerance: f64 },

    #[error("time {time} is not a sample of the trajectory")]
    TimeNotOnGrid { time: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical scheme rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Instability { .. } | Error::NonFinite { .. }
        )
    }
}
