//! Small-epsilon predictions for the gap mode of the first tongue, and
//! envelope fitting to compare them against computed profiles.
//!
//! Writing `delta = 1/4 + epsilon * delta1` and removing the slow decay
//! `exp(-kappa * epsilon * |t|)` with `kappa = sqrt(1/4 - delta1^2)`, the
//! leading-order solution on each side is `A cos(t/2) + B sin(t/2)`. The
//! secular terms of the next order fix
//!
//! ```text
//! B+/A+ = -B-/A- = sqrt((1 + 2 delta1) / (1 - 2 delta1))
//! ```
//!
//! and since `d/dt sin(t/2) = cos(t/2)/2`, the jump condition at the kick
//! reads `lambda = (B+/A+ - B-/A-) / 2 = B+/A+`. Inverting gives
//! `delta1 = (lambda^2 - 1) / (2 (1 + lambda^2))`.

use rayon::prelude::*;

use crate::delta_kick::solve_delta;
use crate::error::{Error, Result};
use crate::profile::Profile;

/// Closed-form small-epsilon description of the first-tongue gap mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPrediction {
    pub lambda: f64,
    pub delta1: f64,
    /// `sqrt(1/4 - delta1^2)`; multiply by epsilon for the decay rate.
    pub decay_rate_per_eps: f64,
    /// `B+/A+`.
    pub amp_ratio_plus: f64,
    /// `B-/A-`.
    pub amp_ratio_minus: f64,
}

fn require_positive_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "the gap-mode strength (lambda > 0)",
            value: lambda,
        })
    }
}

pub fn delta1_of_lambda(lambda: f64) -> Result<f64> {
    require_positive_lambda(lambda)?;
    let l2 = lambda * lambda;
    Ok((l2 - 1.0) / (2.0 * (1.0 + l2)))
}

pub fn lambda_of_delta1(delta1: f64) -> Result<f64> {
    if !(delta1.abs() < 0.5) {
        return Err(Error::Domain {
            what: "delta1 (|delta1| < 1/2)",
            value: delta1,
        });
    }
    Ok(((1.0 + 2.0 * delta1) / (1.0 - 2.0 * delta1)).sqrt())
}

/// `B+/A+` as a function of `delta1`, written as `sqrt(1 - 4 delta1^2) / (1 - 2 delta1)`.
pub fn amplitude_ratio(delta1: f64) -> Result<f64> {
    if !(delta1.abs() < 0.5) {
        return Err(Error::Domain {
            what: "delta1 (|delta1| < 1/2)",
            value: delta1,
        });
    }
    Ok((1.0 - 4.0 * delta1 * delta1).sqrt() / (1.0 - 2.0 * delta1))
}

/// Strength implied by the jump condition from the two amplitude ratios,
/// keeping the factor 1/2 of `d/dt sin(t/2)`.
pub fn jump_lambda(amp_ratio_plus: f64, amp_ratio_minus: f64) -> f64 {
    0.5 * (amp_ratio_plus - amp_ratio_minus)
}

/// The strength obtained when the 1/2 from differentiating `sin(t/2)` is
/// dropped: `2 sqrt(1 - 4 delta1^2) / (1 - 2 delta1)`. Kept only so the
/// comparison suite can show that the numerics reject it.
pub fn lambda_of_delta1_without_half(delta1: f64) -> Result<f64> {
    Ok(2.0 * amplitude_ratio(delta1)?)
}

/// `epsilon * sqrt(1/4 - delta1(lambda)^2)`.
pub fn decay_rate(lambda: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain {
            what: "epsilon (epsilon > 0)",
            value: epsilon,
        });
    }
    let d1 = delta1_of_lambda(lambda)?;
    Ok(epsilon * (0.25 - d1 * d1).sqrt())
}

pub fn predict(lambda: f64) -> Result<AsymptoticPrediction> {
    let delta1 = delta1_of_lambda(lambda)?;
    let ratio = amplitude_ratio(delta1)?;
    Ok(AsymptoticPrediction {
        lambda,
        delta1,
        decay_rate_per_eps: (0.25 - delta1 * delta1).sqrt(),
        amp_ratio_plus: ratio,
        amp_ratio_minus: -ratio,
    })
}

/// Result of [`fit_envelope`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    /// Mean of the two one-sided rate magnitudes.
    pub rate: f64,
    /// `-d ln|x| / dt` over the extrema with `t > 0`.
    pub right_rate: f64,
    /// `d ln|x| / dt` over the extrema with `t < 0`.
    pub left_rate: f64,
    /// `|right_rate - left_rate|`.
    pub asymmetry: f64,
    pub extrema: (usize, usize),
}

const MIN_EXTREMA: usize = 10;

/// Fits exponential envelopes to the local maxima of `|x|` on each side of
/// the origin. Extrema are refined by parabolic interpolation, then
/// `ln|x|` is regressed linearly on `t`.
pub fn fit_envelope(profile: &Profile) -> Result<EnvelopeFit> {
    let (t, x) = (&profile.t, &profile.x);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 1..profile.len().saturating_sub(1) {
        let (y0, y1, y2) = (x[i - 1].abs(), x[i].abs(), x[i + 1].abs());
        if !(y1 > y0 && y1 >= y2) || y1 < f64::MIN_POSITIVE {
            continue;
        }
        let curvature = y0 - 2.0 * y1 + y2;
        let (tp, yp) = if curvature < 0.0 {
            let off = 0.5 * (y0 - y2) / curvature;
            let h = 0.5 * (t[i + 1] - t[i - 1]);
            (t[i] + off * h, y1 - 0.25 * (y0 - y2) * off)
        } else {
            (t[i], y1)
        };
        if t[i] > 0.0 {
            right.push((tp, yp.ln()));
        } else if t[i] < 0.0 {
            left.push((tp, yp.ln()));
        }
    }
    if left.len() < MIN_EXTREMA || right.len() < MIN_EXTREMA {
        return Err(Error::Fit(format!(
            "need {MIN_EXTREMA} extrema per side, found {} left and {} right",
            left.len(),
            right.len()
        )));
    }
    let right_rate = -slope(&right);
    let left_rate = slope(&left);
    Ok(EnvelopeFit {
        rate: 0.5 * (right_rate.abs() + left_rate.abs()),
        right_rate,
        left_rate,
        asymmetry: (right_rate - left_rate).abs(),
        extrema: (left.len(), right.len()),
    })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(tt, y) in points {
        sxy += (tt - mt) * (y - my);
        sxx += (tt - mt) * (tt - mt);
    }
    sxy / sxx
}

/// One row of [`compare_asymptotic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticComparison {
    pub epsilon: f64,
    pub lambda: f64,
    pub delta1_numeric: f64,
    pub delta1_formula: f64,
    pub error: f64,
}

/// Tolerance on the computed first-tongue eigenvalue used for comparisons.
const COMPARE_TOL: f64 = 1e-13;

/// Numerical `delta1 = (delta - 1/4) / epsilon` against the closed form for
/// every `(epsilon, lambda)` pair, epsilon-major.
pub fn compare_asymptotic(epsilons: &[f64], lambdas: &[f64]) -> Result<Vec<AsymptoticComparison>> {
    for &e in epsilons {
        if !(e > 0.0 && e <= 0.1) {
            return Err(Error::Domain {
                what: "comparison epsilon (0 < epsilon <= 0.1)",
                value: e,
            });
        }
    }
    for &l in lambdas {
        require_positive_lambda(l)?;
    }
    let pairs: Vec<(f64, f64)> = epsilons
        .iter()
        .flat_map(|&e| lambdas.iter().map(move |&l| (e, l)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(epsilon, lambda)| {
            let delta = solve_delta(lambda, epsilon, 1, COMPARE_TOL)?;
            let delta1_numeric = (delta - 0.25) / epsilon;
            let delta1_formula = delta1_of_lambda(lambda)?;
            Ok(AsymptoticComparison {
                epsilon,
                lambda,
                delta1_numeric,
                delta1_formula,
                error: (delta1_numeric - delta1_formula).abs(),
            })
        })
        .collect()
}
