//! Gap modes for finite-width kicks by two-sided shooting.
//!
//! Beyond `|t| = T = 2 pi N` the kick is negligible, so the mode there is the
//! decaying Floquet solution of the bare equation. Both branches are
//! started from those states at `+T` and `-T` and integrated inward; a
//! mode exists where they are proportional at the origin, i.e. where their
//! Wronskian vanishes.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::asymptotics::fit_envelope;
use crate::delta_kick::{gap_interior, solve_delta, GapMode, OriginJoin, DEFAULT_DELTA_TOL};
use crate::error::{Error, Result};
use crate::floquet::{decaying_mode_of, gap_index, monodromy, sample_mode, Direction, FloquetMode};
use crate::ode::{KickSpec, MathieuParams, Propagator, State, DEFAULT_TOL};
use crate::profile::Profile;
use crate::roots::{bisect_secant, linspace};

/// Cap on the number of periods in the match radius.
pub const MAX_MATCH_PERIODS: u32 = 64;
/// Kick magnitude at the match radius relative to its peak.
pub const TAIL_THRESHOLD: f64 = 1e-12;

const SCAN_POINTS: usize = 48;
const DEFAULT_SAMPLES: usize = 4001;

/// Smallest `N` with `|F(2 pi N)| < 1e-12 |F(0)|`, capped at [`MAX_MATCH_PERIODS`].
pub fn match_periods(kick: &KickSpec) -> u32 {
    let peak = kick.peak_magnitude();
    (1..=MAX_MATCH_PERIODS)
        .find(|&n| {
            let tail = kick.value(2.0 * PI * n as f64).map(f64::abs).unwrap_or(0.0);
            tail < TAIL_THRESHOLD * peak
        })
        .unwrap_or(MAX_MATCH_PERIODS)
}

/// A shooting problem for the eigenvalue `delta` at fixed `epsilon` and kick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingProblem {
    pub epsilon: f64,
    pub kick: KickSpec,
    /// Match radius in periods: `T = 2 pi periods`.
    pub periods: u32,
    pub tol: f64,
    /// Samples of the profile built by [`solve_bvp`].
    pub samples: usize,
    /// Half-width of the profile window; at least `T`.
    pub half_window: f64,
}

impl ShootingProblem {
    pub fn new(epsilon: f64, kick: KickSpec) -> Result<Self> {
        if kick.is_dirac() || kick.is_none() {
            return Err(Error::Contract("shooting needs a finite-width kick"));
        }
        kick.validate()?;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be positive, got {epsilon}"),
            });
        }
        let periods = match_periods(&kick);
        Ok(Self {
            epsilon,
            kick,
            periods,
            tol: DEFAULT_TOL,
            samples: DEFAULT_SAMPLES,
            half_window: 2.0 * PI * periods as f64,
        })
    }

    pub fn with_profile(mut self, half_window: f64, samples: usize) -> Self {
        self.half_window = half_window;
        self.samples = samples;
        self
    }

    pub fn match_time(&self) -> f64 {
        2.0 * PI * self.periods as f64
    }
}

/// State at the origin of each inward branch.
struct Branches {
    mode: FloquetMode,
    right: State,
    left: State,
}

fn shoot(problem: &ShootingProblem, delta: f64) -> Result<Branches> {
    let params = MathieuParams::new(delta, problem.epsilon)?;
    let mono = monodromy(&params)?;
    let mode = decaying_mode_of(&params, &mono, Direction::Plus)?;
    let (x0, v0) = mode.init_state;
    let t_match = problem.match_time();
    let right = Propagator::new(params, problem.kick, State::new(x0, v0, t_match), problem.tol)?.advance_to(0.0)?;
    let left = Propagator::new(params, problem.kick, State::new(x0, -v0, -t_match), problem.tol)?.advance_to(0.0)?;
    Ok(Branches { mode, right, left })
}

/// Normalized Wronskian `(x+ x-' - x- x+') / (|+| |-|)` of the inward
/// branches at the origin.
pub fn mismatch(problem: &ShootingProblem, delta: f64) -> Result<f64> {
    let b = shoot(problem, delta)?;
    let (r, l) = (b.right, b.left);
    Ok((r.x * l.v - l.x * r.v) / (r.norm() * l.norm()))
}

/// Finds the gap mode of the finite kick inside tongue `n`.
///
/// The mismatch is scanned over the tongue interior; sign changes are
/// refined by bisection. With several roots the one closest to the Dirac
/// eigenvalue of equal integrated strength is returned.
pub fn solve_bvp(problem: &ShootingProblem, n: u32) -> Result<GapMode> {
    let (a, b) = gap_interior(problem.epsilon, n)?;
    let deltas = linspace(a, b, SCAN_POINTS);
    let values: Vec<f64> = deltas
        .par_iter()
        .map(|&d| mismatch(problem, d))
        .collect::<Result<_>>()?;

    let strength = problem.kick.effective_strength();
    let reference = if strength > 0.0 {
        solve_delta(strength, problem.epsilon, n, DEFAULT_DELTA_TOL).ok()
    } else {
        None
    };

    let mut roots = Vec::new();
    for i in 0..SCAN_POINTS - 1 {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            roots.push(deltas[i]);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let root = bisect_secant(
                |d| mismatch(problem, d),
                (deltas[i], f0),
                (deltas[i + 1], f1),
                DEFAULT_DELTA_TOL,
            )?;
            roots.push(root);
        }
    }
    let target = reference.unwrap_or(0.5 * (a + b));
    let delta = roots
        .into_iter()
        .min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()))
        .ok_or_else(|| Error::RootNotFound {
            n,
            scan: deltas.iter().copied().zip(values.iter().copied()).collect(),
        })?;
    assemble(problem, delta)
}

fn assemble(problem: &ShootingProblem, delta: f64) -> Result<GapMode> {
    let params = MathieuParams::new(delta, problem.epsilon)?;
    let branches = shoot(problem, delta)?;
    let (r, l) = (branches.right, branches.left);
    let mode = branches.mode;
    let t_match = problem.match_time();
    let half_window = problem.half_window.max(t_match);
    let samples = problem.samples.max(3);

    // Scale for the left branch so it joins the right one at the origin.
    let scale = (r.x * l.x + r.v * l.v) / (l.x * l.x + l.v * l.v);

    let t = linspace(-half_window, half_window, samples);
    let mut x = vec![0.0; samples];
    let (x0, v0) = mode.init_state;
    let mu_n = mode.multiplier.powi(problem.periods as i32);

    // Inside the match radius: integrate each branch inward through its samples.
    let inner_right: Vec<usize> = (0..samples).filter(|&i| t[i] >= 0.0 && t[i] <= t_match).collect();
    let mut prop = Propagator::new(params, problem.kick, State::new(x0, v0, t_match), problem.tol)?;
    for &i in inner_right.iter().rev() {
        x[i] = prop.advance_to(t[i])?.x;
    }
    let inner_left: Vec<usize> = (0..samples).filter(|&i| t[i] < 0.0 && t[i] >= -t_match).collect();
    let mut prop = Propagator::new(params, problem.kick, State::new(x0, -v0, -t_match), problem.tol)?;
    for &i in &inner_left {
        x[i] = scale * prop.advance_to(t[i])?.x;
    }

    // Outside it: bare Floquet tails, which equal mu^N times the branch state at +-T.
    let outer_right: Vec<usize> = (0..samples).filter(|&i| t[i] > t_match).collect();
    let times: Vec<f64> = outer_right.iter().map(|&i| t[i]).collect();
    for (&i, v) in outer_right
        .iter()
        .zip(sample_mode(&params, &mode, &times, problem.tol)?)
    {
        x[i] = v / mu_n;
    }
    let minus = FloquetMode {
        init_state: (x0, -v0),
        direction: Direction::Minus,
        ..mode
    };
    let outer_left: Vec<usize> = (0..samples).filter(|&i| t[i] < -t_match).collect();
    let times: Vec<f64> = outer_left.iter().map(|&i| t[i]).collect();
    for (&i, v) in outer_left
        .iter()
        .zip(sample_mode(&params, &minus, &times, problem.tol)?)
    {
        x[i] = scale * v / mu_n;
    }

    let mut profile = Profile::new(t, x);
    let peak = profile.normalize_peak();
    let gap_index = gap_index(&params)?;
    Ok(GapMode {
        params,
        kick: problem.kick,
        gap_index,
        lambda: problem.kick.effective_strength(),
        measured_decay: fit_envelope(&profile).ok().map(|f| f.rate),
        profile,
        delta1: (gap_index == 1).then(|| (delta - 0.25) / problem.epsilon),
        origin: OriginJoin {
            x: r.x / peak,
            slope_left: scale * l.v / peak,
            slope_right: r.v / peak,
        },
        multiplier: mode.multiplier,
    })
}

/// Gaussian-kick eigenvalues `delta(w)` for widths sorted descending.
pub fn width_sweep(epsilon: f64, lambda: f64, n: u32, widths: &[f64]) -> Result<Vec<(f64, f64)>> {
    if widths.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "widths",
            reason: "all widths must be positive".into(),
        });
    }
    if widths.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            name: "widths",
            reason: "must be sorted strictly descending".into(),
        });
    }
    widths
        .par_iter()
        .map(|&width| {
            let problem = ShootingProblem::new(
                epsilon,
                KickSpec::Gaussian {
                    strength: lambda,
                    width,
                },
            )?;
            Ok((width, solve_bvp(&problem, n)?.params.delta))
        })
        .collect()
}

/// Zero-width limit from the two narrowest rows of a sweep, assuming
/// `delta(w) = delta(0) + c w + O(w^2)`.
///
/// The leading correction is linear because a Dirac-kicked mode has a kink
/// at the origin, so smoothing it over a width `w` shifts the effective
/// strength by an amount proportional to `w`.
pub fn extrapolate_zero_width(sweep: &[(f64, f64)]) -> Result<f64> {
    let [.., (w1, d1), (w2, d2)] = sweep else {
        return Err(Error::InvalidParameter {
            name: "sweep",
            reason: "extrapolation needs at least two widths".into(),
        });
    };
    if !(w1 > w2 && *w2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sweep",
            reason: "widths must be positive and descending".into(),
        });
    }
    Ok(d2 - w2 * (d1 - d2) / (w1 - w2))
}
