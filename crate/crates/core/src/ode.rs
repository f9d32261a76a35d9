//! Adaptive propagation of the phase-space state `(x, x')` of
//!
//! ```text
//! x'' + (delta + epsilon cos t + F(t)) x = 0
//! ```
//!
//! where `F` is an optional localized kick. The integrator is the
//! Dormand-Prince 5(4) embedded pair with local extrapolation (the
//! fifth-order solution is propagated) and FSAL stage reuse.
//!
//! Dirac kicks are never integrated here: they act through an exact jump
//! in `x'` and are handled by the gap-mode matching in [`crate::delta_kick`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default local error tolerance of the integrator.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_STEP: f64 = 0.5;
const MAX_STEPS: usize = 50_000_000;

/// The pair `(delta, epsilon)` of the Mathieu equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuParams {
    pub delta: f64,
    pub epsilon: f64,
}

impl MathieuParams {
    /// Checked constructor. A negative `epsilon` is rejected: its sign is
    /// absorbed by the half-period shift `t -> t + pi`.
    pub fn new(delta: f64, epsilon: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("must be finite, got {delta}"),
            });
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be finite and non-negative, got {epsilon}"),
            });
        }
        Ok(Self { delta, epsilon })
    }

    #[inline]
    fn periodic_part(&self, t: f64) -> f64 {
        self.delta + self.epsilon * t.cos()
    }
}

/// A point in phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x: f64,
    pub v: f64,
    pub t: f64,
}

impl State {
    pub fn new(x: f64, v: f64, t: f64) -> Self {
        Self { x, v, t }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.v)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.v.is_finite() && self.t.is_finite()
    }
}

/// Localized perturbation `F(t)` added to the periodic potential.
///
/// Finite-width profiles `g_w` integrate to one, so `F = -strength * g_w`
/// tends to `-strength * dirac(t)` as the width shrinks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KickSpec {
    None,
    /// `F(t) = -strength * dirac(t)`.
    Dirac {
        strength: f64,
    },
    /// `g_w(t) = exp(-t^2 / 2w^2) / (w sqrt(2 pi))`.
    Gaussian {
        strength: f64,
        width: f64,
    },
    /// `g_w(t) = (1/pi) w / (w^2 + t^2)`.
    Lorentzian {
        strength: f64,
        width: f64,
    },
    /// `F(t) = -s^2 / (1 + s^2 t^2)^2`, the magnetic-shear potential of the
    /// ballooning TAE equation.
    TaeShear {
        shear: f64,
    },
}

impl KickSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        match *self {
            KickSpec::None => Ok(()),
            KickSpec::Dirac { strength } if !strength.is_finite() => {
                bad("strength", format!("must be finite, got {strength}"))
            }
            KickSpec::Gaussian { strength, width } | KickSpec::Lorentzian { strength, width } => {
                if !strength.is_finite() {
                    bad("strength", format!("must be finite, got {strength}"))
                } else if !(width.is_finite() && width > 0.0) {
                    bad("width", format!("must be positive, got {width}"))
                } else {
                    Ok(())
                }
            }
            KickSpec::TaeShear { shear } if !(shear.is_finite() && shear > 0.0) => {
                bad("shear", format!("must be positive, got {shear}"))
            }
            _ => Ok(()),
        }
    }

    pub fn is_dirac(&self) -> bool {
        matches!(self, KickSpec::Dirac { .. })
    }

    pub fn is_none(&self) -> bool {
        matches!(self, KickSpec::None)
    }

    /// Short lowercase name used in tables.
    pub fn name(&self) -> &'static str {
        match self {
            KickSpec::None => "none",
            KickSpec::Dirac { .. } => "dirac",
            KickSpec::Gaussian { .. } => "gaussian",
            KickSpec::Lorentzian { .. } => "lorentzian",
            KickSpec::TaeShear { .. } => "tae",
        }
    }

    /// Width parameter of the profile (`1/s` for the shear potential).
    pub fn width(&self) -> Option<f64> {
        match *self {
            KickSpec::Gaussian { width, .. } | KickSpec::Lorentzian { width, .. } => Some(width),
            KickSpec::TaeShear { shear } => Some(1.0 / shear),
            KickSpec::None | KickSpec::Dirac { .. } => None,
        }
    }

    /// `-integral of F dt`: the strength of the equivalent Dirac kick.
    ///
    /// For the shear potential this is `pi s / 2`.
    pub fn effective_strength(&self) -> f64 {
        match *self {
            KickSpec::None => 0.0,
            KickSpec::Dirac { strength }
            | KickSpec::Gaussian { strength, .. }
            | KickSpec::Lorentzian { strength, .. } => strength,
            KickSpec::TaeShear { shear } => 0.5 * PI * shear,
        }
    }

    /// `F(t)`; the Dirac variant has no pointwise value.
    pub fn value(&self, t: f64) -> Result<f64> {
        match *self {
            KickSpec::Dirac { .. } => Err(Error::Contract(
                "a Dirac kick has no pointwise value; use jump matching",
            )),
            _ => Ok(self.smooth_value(t)),
        }
    }

    /// `|F(0)|`, the peak magnitude of a finite kick.
    pub fn peak_magnitude(&self) -> f64 {
        match self {
            KickSpec::None | KickSpec::Dirac { .. } => 0.0,
            _ => self.smooth_value(0.0).abs(),
        }
    }

    #[inline]
    fn smooth_value(&self, t: f64) -> f64 {
        match *self {
            KickSpec::None | KickSpec::Dirac { .. } => 0.0,
            KickSpec::Gaussian { strength, width } => {
                let z = t / width;
                -strength * (-0.5 * z * z).exp() / (width * (2.0 * PI).sqrt())
            }
            KickSpec::Lorentzian { strength, width } => -strength * width / (PI * (width * width + t * t)),
            KickSpec::TaeShear { shear } => {
                let s2 = shear * shear;
                let r = 1.0 + s2 * t * t;
                -s2 / (r * r)
            }
        }
    }

    /// Region `|t| <= half_extent` inside which steps are capped at `max_step`.
    fn resolution_window(&self) -> Option<(f64, f64)> {
        self.width().map(|w| (8.0 * w, 0.25 * w))
    }
}

/// `delta + epsilon cos t + F(t)`.
pub fn potential_value(params: &MathieuParams, kick: &KickSpec, t: f64) -> Result<f64> {
    Ok(params.periodic_part(t) + kick.value(t)?)
}

/// Real 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn from_columns(c0: (f64, f64), c1: (f64, f64)) -> Self {
        Matrix2([[c0.0, c1.0], [c0.1, c1.1]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }

    pub fn apply(&self, u: (f64, f64)) -> (f64, f64) {
        let m = &self.0;
        (m[0][0] * u.0 + m[0][1] * u.1, m[1][0] * u.0 + m[1][1] * u.1)
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type Vec2 = [f64; 2];

#[inline]
fn axpy(y: &Vec2, h: f64, terms: &[(f64, &Vec2)]) -> Vec2 {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Stateful integrator that remembers its step size between calls, so a
/// trajectory can be sampled at many output times cheaply.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: MathieuParams,
    kick: KickSpec,
    tol: f64,
    state: State,
    h: f64,
    fsal: Option<Vec2>,
    steps: usize,
}

impl Propagator {
    pub fn new(params: MathieuParams, kick: KickSpec, state: State, tol: f64) -> Result<Self> {
        if kick.is_dirac() {
            return Err(Error::Contract(
                "Dirac kicks are handled by jump matching, not by integration",
            ));
        }
        kick.validate()?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                reason: format!("must be positive, got {tol}"),
            });
        }
        if !state.is_finite() {
            return Err(Error::InvalidParameter {
                name: "state",
                reason: "initial state must be finite".into(),
            });
        }
        Ok(Self {
            params,
            kick,
            tol,
            state,
            h: 0.01,
            fsal: None,
            steps: 0,
        })
    }

    pub fn state(&self) -> State {
        self.state
    }

    /// Accepted steps so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Replaces `(x, v)` at the current time, e.g. to renormalize a
    /// growing solution. The ODE is linear so any rescaling is exact.
    pub fn rescale(&mut self, factor: f64) {
        self.state.x *= factor;
        self.state.v *= factor;
        self.fsal = None;
    }

    #[inline]
    fn rhs(&self, t: f64, y: &Vec2) -> Vec2 {
        let q = self.params.periodic_part(t) + self.kick.smooth_value(t);
        [y[1], -q * y[0]]
    }

    /// Step-length limit at `t` going in direction `dir` for a trial `h`.
    fn limit_step(&self, t: f64, dir: f64, h: f64) -> f64 {
        let mut h = h.min(MAX_STEP);
        if let Some((c, cap)) = self.kick.resolution_window() {
            let end = t + dir * h;
            let (lo, hi) = if end < t { (end, t) } else { (t, end) };
            if lo < c && hi > -c {
                if t < -c || t > c {
                    let to_boundary = if t < -c { -c - t } else { t - c };
                    h = h.min(to_boundary);
                } else {
                    h = h.min(cap);
                }
            }
        }
        h
    }

    /// Integrates to `t_end` (forward or backward) and returns the new state.
    pub fn advance_to(&mut self, t_end: f64) -> Result<State> {
        if !t_end.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t_end",
                reason: format!("must be finite, got {t_end}"),
            });
        }
        let dir = if t_end >= self.state.t { 1.0 } else { -1.0 };
        if self.fsal.is_some() && self.h.signum() != dir {
            self.fsal = None;
        }
        let mut h_mag = self.h.abs();
        let mut y: Vec2 = [self.state.x, self.state.v];
        let mut t = self.state.t;

        while (t_end - t) * dir > 0.0 {
            let remaining = (t_end - t).abs();
            let mut hs = self.limit_step(t, dir, h_mag);
            let last = hs >= remaining;
            if last {
                hs = remaining;
            }
            let h = dir * hs;

            let k1 = match self.fsal {
                Some(k) => k,
                None => self.rhs(t, &y),
            };
            let k2 = self.rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = self.rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = self.rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = self.rhs(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = self.rhs(
                t + h,
                &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let t_new = if last { t_end } else { t + h };
            let k7 = self.rhs(t_new, &y_new);

            let mut err = 0.0f64;
            for i in 0..2 {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.tol * 1.0f64.max(y[i].abs()).max(y_new[i].abs());
                err = err.max(e.abs() / scale);
            }

            if err <= 1.0 && y_new[0].is_finite() && y_new[1].is_finite() {
                t = t_new;
                y = y_new;
                self.fsal = Some(k7);
                self.steps += 1;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h_mag = hs * grow;
                if self.steps > MAX_STEPS {
                    self.commit(t, y, h_mag, dir);
                    return Err(Error::Integration {
                        last_good: self.state,
                        reason: "step budget exhausted".into(),
                    });
                }
            } else {
                // FSAL stage at `t` is still valid; only the step shrinks.
                self.fsal = Some(k1);
                let shrink = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                h_mag = hs * shrink;
                if h_mag < 1e-13 * t.abs().max(1.0) {
                    self.commit(t, y, h_mag, dir);
                    return Err(Error::Integration {
                        last_good: self.state,
                        reason: format!("step size underflow (h = {h_mag:.3e})"),
                    });
                }
            }
        }
        self.commit(t, y, h_mag, dir);
        Ok(self.state)
    }

    fn commit(&mut self, t: f64, y: Vec2, h_mag: f64, dir: f64) {
        self.state = State::new(y[0], y[1], t);
        self.h = dir * h_mag.max(1e-6);
    }
}

/// Propagates `state` to `t_end` under the potential `delta + epsilon cos t + F(t)`.
pub fn propagate(params: &MathieuParams, kick: &KickSpec, state: State, t_end: f64, tol: f64) -> Result<State> {
    Propagator::new(*params, *kick, state, tol)?.advance_to(t_end)
}

/// Fundamental matrix from `t0` to `t1`: columns are the propagated
/// states of `(1, 0)` and `(0, 1)`.
pub fn fundamental_matrix(params: &MathieuParams, kick: &KickSpec, t0: f64, t1: f64, tol: f64) -> Result<Matrix2> {
    let c0 = propagate(params, kick, State::new(1.0, 0.0, t0), t1, tol)?;
    let c1 = propagate(params, kick, State::new(0.0, 1.0, t0), t1, tol)?;
    Ok(Matrix2::from_columns((c0.x, c0.v), (c1.x, c1.v)))
}
