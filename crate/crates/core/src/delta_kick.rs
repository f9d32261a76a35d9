//! Gap modes of `x'' + (delta + epsilon cos t - lambda dirac(t)) x = 0`.
//!
//! Away from the origin the mode is a decaying Floquet solution on each
//! side: `m+` for `t > 0` and `m-` for `t < 0`. Continuity at `t = 0` and
//! the jump `x'(0+) - x'(0-) = lambda x(0)` leave a single condition,
//!
//! ```text
//! lambda = m+'(0)/m+(0) - m-'(0)/m-(0)
//! ```
//!
//! so each in-gap `(delta, epsilon)` supports a mode for exactly one kick
//! strength. Because the potential is even, `m-(t) = m+(-t)` and the
//! condition reduces to `lambda = 2 v0/x0` for the state `(x0, v0)` of `m+`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::asymptotics::fit_envelope;
use crate::error::{Error, Result};
use crate::floquet::{
    decaying_mode_of, gap_edges, gap_index, growing_eigenvector, monodromy, sample_mode, Direction, FloquetMode,
};
use crate::ode::{KickSpec, MathieuParams, DEFAULT_TOL};
use crate::profile::Profile;
use crate::roots::{bisect_secant, linspace};

/// Tolerance used when locating tongue edges for bracketing.
pub(crate) const EDGE_SOLVE_TOL: f64 = 1e-13;
/// Default tolerance on the eigenvalue `delta`.
pub const DEFAULT_DELTA_TOL: f64 = 1e-12;

const POLE_GUARD: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-6;

/// Values of the mode and its one-sided slopes at the kick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginJoin {
    pub x: f64,
    pub slope_left: f64,
    pub slope_right: f64,
}

impl OriginJoin {
    /// `x'(0+) - x'(0-)`.
    pub fn jump(&self) -> f64 {
        self.slope_right - self.slope_left
    }
}

/// A converged gap mode with its sampled profile.
#[derive(Debug, Clone, PartialEq)]
pub struct GapMode {
    pub params: MathieuParams,
    pub kick: KickSpec,
    pub gap_index: u32,
    /// Kick strength; for finite kicks, the equivalent Dirac strength.
    pub lambda: f64,
    /// Normalized to `max |x| = 1`.
    pub profile: Profile,
    /// Envelope decay rate, when the window holds enough extrema to fit.
    pub measured_decay: Option<f64>,
    /// `(delta - 1/4) / epsilon`, recorded for the first tongue only.
    pub delta1: Option<f64>,
    /// Join at the origin in the normalization of `profile`.
    pub origin: OriginJoin,
    /// Floquet multiplier of the unperturbed tails.
    pub multiplier: f64,
}

fn plus_mode(params: &MathieuParams) -> Result<FloquetMode> {
    let mono = monodromy(params)?;
    decaying_mode_of(params, &mono, Direction::Plus)
}

/// The two evaluations of the matching condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaForms {
    /// `m+'(0)/m+(0) - m-'(0)/m-(0)` with `m-` taken as the growing
    /// eigenvector of the period map.
    pub general: f64,
    /// `2 v0 / x0` of the decaying eigenvector.
    pub parity: f64,
}

pub fn lambda_required_forms(params: &MathieuParams) -> Result<LambdaForms> {
    let mono = monodromy(params)?;
    let plus = decaying_mode_of(params, &mono, Direction::Plus)?;
    let (x0, v0) = plus.init_state;
    let (xm, vm) = growing_eigenvector(&mono);
    if x0.abs() <= POLE_GUARD || xm.abs() <= POLE_GUARD {
        return Err(Error::Pole { delta: params.delta });
    }
    Ok(LambdaForms {
        general: v0 / x0 - vm / xm,
        parity: 2.0 * v0 / x0,
    })
}

/// Kick strength for which `(delta, epsilon)` carries a gap mode.
pub fn lambda_required(params: &MathieuParams) -> Result<f64> {
    let plus = plus_mode(params)?;
    let (x0, v0) = plus.init_state;
    if x0.abs() <= POLE_GUARD {
        return Err(Error::Pole { delta: params.delta });
    }
    Ok(2.0 * v0 / x0)
}

/// Wronskian `m+(0) m-'(0) - m-(0) m+'(0)` of the two decaying branches,
/// with `m-` the parity image of `m+`. Equals `-lambda_required * x0^2`.
pub fn wronskian_check(params: &MathieuParams) -> Result<f64> {
    let mono = monodromy(params)?;
    let plus = decaying_mode_of(params, &mono, Direction::Plus)?;
    let minus = decaying_mode_of(params, &mono, Direction::Minus)?;
    let (xp, vp) = plus.init_state;
    let (xm, vm) = minus.init_state;
    Ok(xp * vm - xm * vp)
}

/// Interior of tongue `n` kept clear of the edges, where the Floquet
/// branches coalesce.
pub(crate) fn gap_interior(epsilon: f64, n: u32) -> Result<(f64, f64)> {
    let (lo, hi) = gap_edges(epsilon, n, EDGE_SOLVE_TOL)?;
    let inset = 1e-5f64.min(1e-3 * (hi - lo));
    Ok((lo + inset, hi - inset))
}

/// The unique `delta` inside tongue `n` whose gap mode has strength `lambda`.
pub fn solve_delta(lambda: f64, epsilon: f64, n: u32, tol: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NoGapMode { lambda });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let (a, b) = gap_interior(epsilon, n)?;
    let residual = |delta: f64| -> Result<f64> { Ok(lambda_required(&MathieuParams::new(delta, epsilon)?)? - lambda) };
    let (fa, fb) = (residual(a)?, residual(b)?);
    if fa.signum() == fb.signum() {
        let scan = linspace(a, b, 33)
            .into_iter()
            .map(|d| (d, residual(d).unwrap_or(f64::NAN)))
            .collect();
        return Err(Error::RootNotFound { n, scan });
    }
    bisect_secant(residual, (a, fa), (b, fb), tol)
}

/// Assembles the gap mode at an in-gap `(delta, epsilon)` from the two
/// decaying Floquet branches, sampled on `samples` points of
/// `[-half_window, half_window]`.
pub fn build_profile(delta: f64, epsilon: f64, lambda: f64, half_window: f64, samples: usize) -> Result<GapMode> {
    if !(half_window > 0.0 && half_window.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "half_window",
            reason: format!("must be positive, got {half_window}"),
        });
    }
    if samples < 3 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: format!("need at least 3 samples, got {samples}"),
        });
    }
    let params = MathieuParams::new(delta, epsilon)?;
    let mono = monodromy(&params)?;
    let plus = decaying_mode_of(&params, &mono, Direction::Plus)?;
    let minus = decaying_mode_of(&params, &mono, Direction::Minus)?;
    let (x0, v0) = plus.init_state;
    if x0.abs() <= POLE_GUARD {
        return Err(Error::Pole { delta });
    }
    let required = 2.0 * v0 / x0;
    if !((required - lambda).abs() <= CONSISTENCY_TOL * required.abs().max(1.0)) {
        return Err(Error::InconsistentMode { lambda, required });
    }

    // Both branches equal x0 at the origin, so continuity needs no rescaling.
    let t = linspace(-half_window, half_window, samples);
    let split = t.partition_point(|&s| s < 0.0);
    let left = sample_mode(&params, &minus, &t[..split], DEFAULT_TOL)?;
    let right = sample_mode(&params, &plus, &t[split..], DEFAULT_TOL)?;
    let mut profile = Profile::new(t, left.into_iter().chain(right).collect());
    let peak = profile.normalize_peak();

    let origin = OriginJoin {
        x: x0 / peak,
        slope_left: minus.init_state.1 / peak,
        slope_right: v0 / peak,
    };
    let gap_index = gap_index(&params)?;
    Ok(GapMode {
        params,
        kick: KickSpec::Dirac { strength: lambda },
        gap_index,
        lambda,
        measured_decay: fit_envelope(&profile).ok().map(|f| f.rate),
        profile,
        delta1: (gap_index == 1).then(|| (delta - 0.25) / epsilon),
        origin,
        multiplier: plus.multiplier,
    })
}

/// Solves for the eigenvalue in tongue `n` and builds its profile.
pub fn gap_mode(lambda: f64, epsilon: f64, n: u32, half_window: f64, samples: usize) -> Result<GapMode> {
    let delta = solve_delta(lambda, epsilon, n, DEFAULT_DELTA_TOL)?;
    build_profile(delta, epsilon, lambda, half_window, samples)
}

/// Half-window over which a mode with multiplier `mu` decays by `e^-decades*ln10`.
pub fn decay_window(multiplier: f64, decades: f64) -> f64 {
    let rate = -multiplier.abs().ln() / (2.0 * PI);
    decades * std::f64::consts::LN_10 / rate
}

/// `delta(lambda)` across tongue `n`, one solve per grid point in parallel.
pub fn spectral_flow(epsilon: f64, n: u32, lambda_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if lambda_grid.iter().any(|&l| !(l > 0.0)) {
        let bad = lambda_grid.iter().copied().find(|&l| !(l > 0.0)).unwrap();
        return Err(Error::NoGapMode { lambda: bad });
    }
    if lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "lambda_grid",
            reason: "must be sorted strictly ascending".into(),
        });
    }
    lambda_grid
        .par_iter()
        .map(|&l| Ok((l, solve_delta(l, epsilon, n, DEFAULT_DELTA_TOL)?)))
        .collect()
}
