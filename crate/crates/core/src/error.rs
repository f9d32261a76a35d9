use thiserror::Error;

use crate::ode::State;

/// Errors raised by the integrator, the Floquet analysis and the gap-mode solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("integration failed at t = {}: {reason}", last_good.t)]
    Integration { last_good: State, reason: String },

    #[error("(delta = {delta}, epsilon = {epsilon}) is not strictly inside a gap")]
    NotInGap { delta: f64, epsilon: f64 },

    #[error("Floquet multipliers are near-degenerate (splitting {splitting:.3e})")]
    NearDegenerate { splitting: f64 },

    #[error("no edge of tongue {n} found at epsilon = {epsilon} while scanning delta in [{scan_lo}, {scan_hi}]")]
    EdgeNotFound {
        n: u32,
        epsilon: f64,
        scan_lo: f64,
        scan_hi: f64,
    },

    #[error("m+(0) vanishes at delta = {delta}: the required strength diverges")]
    Pole { delta: f64 },

    #[error("no gap mode exists for lambda = {lambda}; the kick strength must be positive")]
    NoGapMode { lambda: f64 },

    #[error("no sign change of the matching function inside tongue {n} ({} scan points)", scan.len())]
    RootNotFound { n: u32, scan: Vec<(f64, f64)> },

    #[error("lambda = {lambda} does not match the required {required} at this delta")]
    InconsistentMode { lambda: f64, required: f64 },

    #[error("envelope fit failed: {0}")]
    Fit(String),

    #[error("value {value} is outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },
}

impl Error {
    /// Stable machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Contract(_) => "contract",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::Integration { .. } => "integration",
            Error::NotInGap { .. } => "not-in-gap",
            Error::NearDegenerate { .. } => "near-degenerate",
            Error::EdgeNotFound { .. } => "edge-not-found",
            Error::Pole { .. } => "pole",
            Error::NoGapMode { .. } => "no-gap-mode",
            Error::RootNotFound { .. } => "root-not-found",
            Error::InconsistentMode { .. } => "inconsistent-mode",
            Error::Fit(_) => "fit",
            Error::Domain { .. } => "domain",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
