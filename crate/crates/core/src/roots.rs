//! Bracketed scalar root finding: bisection with secant refinement.

use crate::error::Result;

/// Finds a root of `f` in `[lo, hi]` given the endpoint values, which must
/// have opposite signs. Secant steps are taken while they shrink the
/// bracket by at least half; otherwise the next step bisects.
///
/// Returns the bracket endpoint with the smaller residual once the bracket
/// is narrower than `xtol`.
pub fn bisect_secant<F>(mut f: F, (mut a, mut fa): (f64, f64), (mut b, mut fb): (f64, f64), xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    debug_assert!(fa.signum() != fb.signum(), "root is not bracketed");
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut use_secant = true;
    for _ in 0..400 {
        let width = (b - a).abs();
        if width <= xtol {
            break;
        }
        let mid = 0.5 * (a + b);
        let mut x = if use_secant && fb != fa {
            b - fb * (b - a) / (fb - fa)
        } else {
            mid
        };
        if !(x > a.min(b) && x < a.max(b)) {
            x = mid;
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        use_secant = (b - a).abs() < 0.5 * width;
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
