//! Period-map analysis of the unperturbed Mathieu equation.
//!
//! The potential `delta + epsilon cos t` is even, so with the half-period
//! map `Phi(pi) = [[a, b], [c, d]]` the monodromy over `[0, 2 pi]` is
//!
//! ```text
//! M = [[ad + bc, 2bd], [2ac, ad + bc]]
//! ```
//!
//! and, using `ad - bc = 1`, `trace + 2 = 4ad` and `trace - 2 = 4bc`.
//! Tongue edges are therefore simple roots of one half-period entry, and
//! the distance from an edge is a product of two factors that are each
//! computed to integrator accuracy. This keeps the classification and the
//! Floquet eigenvectors well conditioned in tongues whose width is far
//! below the integration tolerance of a full-period trace.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ode::{fundamental_matrix, KickSpec, MathieuParams, Matrix2, Propagator, State, DEFAULT_TOL};
use crate::roots::{bisect_secant, linspace};

/// Default tolerance on `||trace| - 2|` for the edge classification.
pub const DEFAULT_EDGE_TOL: f64 = 1e-9;

/// Half-period entries closer than this to zero are treated as unresolved.
const FACTOR_GUARD: f64 = 10.0 * DEFAULT_TOL;
const MIN_SPLITTING: f64 = 1e-6;

/// Period map of the Mathieu equation over `[0, 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub matrix: Matrix2,
    pub trace: f64,
    half_period: Matrix2,
}

impl Monodromy {
    /// Assembles the full-period map from `Phi(pi)` by reflection symmetry.
    pub fn from_half_period(half_period: Matrix2) -> Self {
        let [[a, b], [c, d]] = half_period.0;
        let diag = a * d + b * c;
        let matrix = Matrix2([[diag, 2.0 * b * d], [2.0 * a * c, diag]]);
        Self {
            matrix,
            trace: 2.0 * diag,
            half_period,
        }
    }

    pub fn half_period(&self) -> &Matrix2 {
        &self.half_period
    }

    /// The two half-period entries whose product measures `|trace| - 2`:
    /// `(a, d)` on the `trace < 0` side, `(b, c)` otherwise.
    pub fn edge_factors(&self) -> (f64, f64) {
        let [[a, b], [c, d]] = self.half_period.0;
        if self.trace < 0.0 {
            (a, d)
        } else {
            (b, c)
        }
    }

    /// `|trace| - 2` in factorized form; positive inside a tongue.
    pub fn instability_excess(&self) -> f64 {
        let (f, g) = self.edge_factors();
        if self.trace < 0.0 {
            -4.0 * f * g
        } else {
            4.0 * f * g
        }
    }

    /// `trace^2 / 4 - 1 = 4abcd`.
    pub fn discriminant(&self) -> f64 {
        let [[a, b], [c, d]] = self.half_period.0;
        4.0 * a * b * c * d
    }

    /// Real Floquet multipliers `(decaying, growing)`, if the discriminant is
    /// non-negative.
    pub fn multipliers(&self) -> Option<(f64, f64)> {
        let disc = self.discriminant();
        if disc < 0.0 {
            return None;
        }
        let sign = if self.trace < 0.0 { -1.0 } else { 1.0 };
        let big = 0.5 * self.trace.abs() + disc.sqrt();
        Some((sign / big, sign * big))
    }

    /// Unit eigenvector for the decaying (`decaying = true`) or growing
    /// multiplier, with `x >= 0`.
    fn eigenvector(&self, decaying: bool) -> (f64, f64) {
        let root = self.discriminant().max(0.0).sqrt();
        let sign = if self.trace < 0.0 { -1.0 } else { 1.0 };
        // mu - trace/2 for the requested branch.
        let shift = if decaying { -sign * root } else { sign * root };
        let m = &self.matrix.0;
        let row0 = (m[0][1], shift);
        let row1 = (shift, m[1][0]);
        let u = if row0.0.hypot(row0.1) >= row1.0.hypot(row1.1) {
            row0
        } else {
            row1
        };
        normalize(u)
    }
}

fn normalize((x, v): (f64, f64)) -> (f64, f64) {
    let n = x.hypot(v);
    let (x, v) = (x / n, v / n);
    if x < 0.0 || (x == 0.0 && v < 0.0) {
        (-x, -v)
    } else {
        (x, v)
    }
}

/// `Phi(pi)` of the unperturbed equation.
pub fn half_period_map(params: &MathieuParams, tol: f64) -> Result<Matrix2> {
    fundamental_matrix(params, &KickSpec::None, 0.0, PI, tol)
}

pub fn monodromy(params: &MathieuParams) -> Result<Monodromy> {
    monodromy_with_tol(params, DEFAULT_TOL)
}

pub fn monodromy_with_tol(params: &MathieuParams, tol: f64) -> Result<Monodromy> {
    Ok(Monodromy::from_half_period(half_period_map(params, tol)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Stable,
    /// Inside a tongue. Index `n >= 1` is the tongue opening at
    /// `delta = n^2 / 4`; index 0 marks the unbounded region below the
    /// lowest band.
    Unstable {
        gap_index: u32,
    },
    Edge,
}

impl StabilityClass {
    pub fn label(&self) -> &'static str {
        match self {
            StabilityClass::Stable => "stable",
            StabilityClass::Unstable { .. } => "unstable",
            StabilityClass::Edge => "edge",
        }
    }

    pub fn gap_index(&self) -> Option<u32> {
        match *self {
            StabilityClass::Unstable { gap_index } => Some(gap_index),
            _ => None,
        }
    }
}

pub fn classify(params: &MathieuParams, edge_tol: f64) -> Result<StabilityClass> {
    if !(edge_tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "edge_tol",
            reason: format!("must be positive, got {edge_tol}"),
        });
    }
    let mono = monodromy(params)?;
    classify_monodromy(params, &mono, edge_tol)
}

fn classify_monodromy(params: &MathieuParams, mono: &Monodromy, edge_tol: f64) -> Result<StabilityClass> {
    let excess = mono.instability_excess();
    if excess.abs() <= edge_tol {
        Ok(StabilityClass::Edge)
    } else if excess < 0.0 {
        Ok(StabilityClass::Stable)
    } else {
        Ok(StabilityClass::Unstable {
            gap_index: rotation_index(params, mono)?,
        })
    }
}

/// Tongue index of an unstable point: the decaying Floquet solution turns
/// through exactly `n pi` in the phase plane over one period.
pub fn gap_index(params: &MathieuParams) -> Result<u32> {
    let mono = monodromy(params)?;
    if mono.instability_excess() <= 0.0 {
        return Err(Error::NotInGap {
            delta: params.delta,
            epsilon: params.epsilon,
        });
    }
    rotation_index(params, &mono)
}

fn rotation_index(params: &MathieuParams, mono: &Monodromy) -> Result<u32> {
    let (x0, v0) = mono.eigenvector(true);
    let q_max = params.delta.abs() + params.epsilon;
    let step = 0.1f64.min(1.0 / q_max.max(1.0));
    let n_steps = (2.0 * PI / step).ceil() as usize;
    let mut prop = Propagator::new(*params, KickSpec::None, State::new(x0, v0, 0.0), DEFAULT_TOL)?;
    let mut angle = v0.atan2(x0);
    let mut turned = 0.0;
    for i in 1..=n_steps {
        let s = prop.advance_to(2.0 * PI * i as f64 / n_steps as f64)?;
        let next = s.v.atan2(s.x);
        let mut d = next - angle;
        if d > PI {
            d -= 2.0 * PI;
        } else if d < -PI {
            d += 2.0 * PI;
        }
        turned += d;
        angle = next;
    }
    Ok((turned.abs() / PI).round() as u32)
}

/// Which end of the line a Floquet solution decays towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `m+`: decays as `t -> +inf`.
    Plus,
    /// `m-`: decays as `t -> -inf`.
    Minus,
}

/// A decaying Floquet solution, identified by its state at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetMode {
    /// Real multiplier with `|mu| < 1`; its sign distinguishes periodic
    /// (even `n`) from antiperiodic (odd `n`) tongues.
    pub multiplier: f64,
    /// `ln|mu| / (2 pi)`, the decay rate per unit time.
    pub exponent: f64,
    /// Unit-norm `(x0, v0)` with `x0 >= 0`.
    pub init_state: (f64, f64),
    pub direction: Direction,
}

impl FloquetMode {
    /// `v0 / x0`, the logarithmic derivative at the origin.
    pub fn log_derivative(&self) -> Result<f64> {
        let (x0, v0) = self.init_state;
        if x0.abs() <= 1e-12 {
            return Err(Error::Pole { delta: f64::NAN });
        }
        Ok(v0 / x0)
    }
}

pub fn decaying_mode(params: &MathieuParams, direction: Direction) -> Result<FloquetMode> {
    let mono = monodromy(params)?;
    decaying_mode_of(params, &mono, direction)
}

/// As [`decaying_mode`] for an already computed period map of `params`.
pub fn decaying_mode_of(params: &MathieuParams, mono: &Monodromy, direction: Direction) -> Result<FloquetMode> {
    if mono.instability_excess() <= 0.0 {
        return Err(Error::NotInGap {
            delta: params.delta,
            epsilon: params.epsilon,
        });
    }
    let (f, g) = mono.edge_factors();
    let splitting = 2.0 * mono.discriminant().max(0.0).sqrt();
    if f.abs().min(g.abs()) <= FACTOR_GUARD || splitting < MIN_SPLITTING {
        return Err(Error::NearDegenerate { splitting });
    }
    let (mu, _) = mono.multipliers().expect("positive excess implies real multipliers");
    let (x0, v0) = mono.eigenvector(true);
    let init_state = match direction {
        Direction::Plus => (x0, v0),
        Direction::Minus => (x0, -v0),
    };
    Ok(FloquetMode {
        multiplier: mu,
        exponent: mu.abs().ln() / (2.0 * PI),
        init_state,
        direction,
    })
}

/// The growing eigenvector of the period map: the state at the origin of the
/// solution that decays as `t -> -inf`, obtained without the parity argument.
pub fn growing_eigenvector(mono: &Monodromy) -> (f64, f64) {
    mono.eigenvector(false)
}

/// Values of a decaying Floquet solution at `times`, normalized so that
/// `x(0)` equals `mode.init_state.0`.
///
/// All times must lie on the decaying side (`t >= 0` for [`Direction::Plus`],
/// `t <= 0` for [`Direction::Minus`]). One period is integrated; the rest
/// follows exactly from `m(t + 2 pi k) = mu^k m(t)` along the decay
/// direction, which avoids both underflow and the instability of
/// integrating a decaying solution over many periods.
pub fn sample_mode(params: &MathieuParams, mode: &FloquetMode, times: &[f64], tol: f64) -> Result<Vec<f64>> {
    let sign = match mode.direction {
        Direction::Plus => 1.0,
        Direction::Minus => -1.0,
    };
    let period = 2.0 * PI;
    // (index, periods, offset into the first period along the decay direction)
    let mut reduced: Vec<(usize, i32, f64)> = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let s = sign * t;
        if s < 0.0 {
            return Err(Error::Contract("mode sampled on its growing side"));
        }
        let k = (s / period).floor();
        reduced.push((i, k as i32, s - k * period));
    }
    reduced.sort_by(|a, b| a.2.total_cmp(&b.2));
    let (x0, v0) = mode.init_state;
    let mut prop = Propagator::new(*params, KickSpec::None, State::new(x0, v0, 0.0), tol)?;
    let mut out = vec![0.0; times.len()];
    for (i, k, offset) in reduced {
        let s = prop.advance_to(sign * offset)?;
        out[i] = s.x * mode.multiplier.powi(k);
    }
    Ok(out)
}

/// Edges `(lower, upper)` of tongue `n` at modulation `epsilon`.
///
/// Each edge is the root nearest `n^2/4` of one half-period entry: `a` and
/// `d` for odd `n` (antiperiodic edge solutions), `b` and `c` for even `n`.
/// Roots are located by an outward scan from the seed and refined by
/// bisection to `tol`.
pub fn gap_edges(epsilon: f64, n: u32, tol: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("tongue edges need epsilon > 0, got {epsilon}"),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "tongue index starts at 1".into(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let entries: [(usize, usize); 2] = if n % 2 == 1 { [(0, 0), (1, 1)] } else { [(1, 0), (0, 1)] };
    let seed = 0.25 * (n * n) as f64;
    let r0 = edge_root(epsilon, n, seed, entries[0], tol)?;
    let r1 = edge_root(epsilon, n, seed, entries[1], tol)?;
    Ok((r0.min(r1), r0.max(r1)))
}

fn edge_root(epsilon: f64, n: u32, seed: f64, (i, j): (usize, usize), tol: f64) -> Result<f64> {
    let entry = |delta: f64| -> Result<f64> {
        let params = MathieuParams::new(delta, epsilon)?;
        Ok(half_period_map(&params, DEFAULT_TOL)?.0[i][j])
    };
    let f_seed = entry(seed)?;
    if f_seed == 0.0 {
        return Ok(seed);
    }
    const SPAN: f64 = 1.0;
    let mut offset = 0.0;
    let mut step = 1e-4;
    let (mut f_up, mut f_down) = (f_seed, f_seed);
    while offset < SPAN {
        let next = (offset + step).min(SPAN);
        let up = entry(seed + next)?;
        if up.signum() != f_up.signum() {
            return bisect_secant(entry, (seed + offset, f_up), (seed + next, up), tol);
        }
        let down = entry(seed - next)?;
        if down.signum() != f_down.signum() {
            return bisect_secant(entry, (seed - next, down), (seed - offset, f_down), tol);
        }
        f_up = up;
        f_down = down;
        offset = next;
        step = (step * 2.0).min(0.02);
    }
    Err(Error::EdgeNotFound {
        n,
        epsilon,
        scan_lo: seed - SPAN,
        scan_hi: seed + SPAN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub delta: f64,
    pub epsilon: f64,
    pub class: StabilityClass,
    pub trace: f64,
}

/// Row-major grid of classifications: one row per `epsilon`, `delta`
/// varying fastest. Points are evaluated in parallel.
pub fn stability_chart(
    delta_range: (f64, f64),
    epsilon_range: (f64, f64),
    grid: (usize, usize),
    edge_tol: f64,
) -> Result<Vec<ChartPoint>> {
    let (nd, ne) = grid;
    if nd == 0 || ne == 0 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "grid dimensions must be positive".into(),
        });
    }
    let deltas = linspace(delta_range.0, delta_range.1, nd);
    let epsilons = linspace(epsilon_range.0, epsilon_range.1, ne);
    let points: Vec<(f64, f64)> = epsilons
        .iter()
        .flat_map(|&e| deltas.iter().map(move |&d| (d, e)))
        .collect();
    points
        .into_par_iter()
        .map(|(delta, epsilon)| {
            let params = MathieuParams::new(delta, epsilon)?;
            let mono = monodromy(&params)?;
            Ok(ChartPoint {
                delta,
                epsilon,
                class: classify_monodromy(&params, &mono, edge_tol)?,
                trace: mono.trace,
            })
        })
        .collect()
}
