//! Sampled solution profiles `(t, x)`.

/// A sampled real profile on an increasing time grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
}

impl Profile {
    pub fn new(t: Vec<f64>, x: Vec<f64>) -> Self {
        assert_eq!(t.len(), x.len(), "time and value series differ in length");
        Self { t, x }
    }

    /// Samples `f` on `samples` evenly spaced points of `[-half_window, half_window]`.
    pub fn from_fn(half_window: f64, samples: usize, f: impl Fn(f64) -> f64) -> Self {
        let t = crate::roots::linspace(-half_window, half_window, samples);
        let x = t.iter().map(|&s| f(s)).collect();
        Self { t, x }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Rescales to `max |x| = 1` and returns the divisor used.
    pub fn normalize_peak(&mut self) -> f64 {
        let peak = self.peak();
        if peak > 0.0 {
            self.x.iter_mut().for_each(|v| *v /= peak);
        }
        peak
    }

    /// `max |x(t) - x(-t)|` over mirrored sample pairs. The grid must be
    /// symmetric about the origin.
    pub fn parity_defect(&self) -> f64 {
        let n = self.len();
        (0..n / 2)
            .map(|i| {
                let j = n - 1 - i;
                debug_assert!((self.t[i] + self.t[j]).abs() <= 1e-9 * self.t[j].abs().max(1.0));
                (self.x[i] - self.x[j]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `(|x| at the first sample, |x| at the last sample)`.
    pub fn end_magnitudes(&self) -> (f64, f64) {
        match (self.x.first(), self.x.last()) {
            (Some(a), Some(b)) => (a.abs(), b.abs()),
            _ => (0.0, 0.0),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.x.iter().copied())
    }
}
