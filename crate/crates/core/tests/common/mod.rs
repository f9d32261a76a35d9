//! Reference computations that share no code with the library: a fixed-step
//! RK4 integrator, a backward shooting estimate of the gap-mode strength,
//! and plain Simpson quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Classical RK4 for `x'' = -q(t) x` from `(x, v)` at `t0` to `t1` in `steps` steps.
pub fn rk4(q: impl Fn(f64) -> f64, mut x: f64, mut v: f64, t0: f64, t1: f64, steps: usize) -> (f64, f64) {
    let h = (t1 - t0) / steps as f64;
    let f = |t: f64, x: f64, v: f64| (v, -q(t) * x);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let (k1x, k1v) = f(t, x, v);
        let (k2x, k2v) = f(t + h / 2.0, x + h / 2.0 * k1x, v + h / 2.0 * k1v);
        let (k3x, k3v) = f(t + h / 2.0, x + h / 2.0 * k2x, v + h / 2.0 * k2v);
        let (k4x, k4v) = f(t + h, x + h * k3x, v + h * k3v);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    (x, v)
}

const STEPS_PER_PERIOD: usize = 4000;

/// State at `t = 0` reached by integrating `x'' + (delta + eps cos t) x = 0`
/// backward from `t = 2 pi periods` with a generic start, normalized each
/// period. Backward integration amplifies the solution that decays forward,
/// so the direction converges to that of `m+(0)`.
pub fn backward_state(delta: f64, epsilon: f64, periods: usize) -> (f64, f64) {
    let q = |t: f64| delta + epsilon * t.cos();
    let (mut x, mut v) = (0.6, 0.8);
    for k in (0..periods).rev() {
        let t1 = 2.0 * PI * (k + 1) as f64;
        let t0 = 2.0 * PI * k as f64;
        (x, v) = rk4(q, x, v, t1, t0, STEPS_PER_PERIOD);
        let norm = x.hypot(v);
        x /= norm;
        v /= norm;
    }
    (x, v)
}

/// `lambda = 2 m+'(0) / m+(0)` by backward shooting over growing windows,
/// stopping once two successive windows agree to `1e-11`.
pub fn shooting_lambda(delta: f64, epsilon: f64) -> f64 {
    let estimate = |periods| {
        let (x, v) = backward_state(delta, epsilon, periods);
        2.0 * v / x
    };
    let mut periods = 4;
    let mut previous = estimate(periods);
    loop {
        periods *= 2;
        let current = estimate(periods);
        if (current - previous).abs() <= 1e-11 * current.abs().max(1.0) || periods >= 1024 {
            return current;
        }
        previous = current;
    }
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(a + i as f64 * h)
        })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Closed-form period map of `x'' + delta x = 0`.
pub fn free_rotation(delta: f64) -> [[f64; 2]; 2] {
    let period = 2.0 * PI;
    if delta == 0.0 {
        return [[1.0, period], [0.0, 1.0]];
    }
    if delta > 0.0 {
        let k = delta.sqrt();
        let (s, c) = (k * period).sin_cos();
        [[c, s / k], [-k * s, c]]
    } else {
        let k = (-delta).sqrt();
        let (s, c) = ((k * period).sinh(), (k * period).cosh());
        [[c, s / k], [k * s, c]]
    }
}
