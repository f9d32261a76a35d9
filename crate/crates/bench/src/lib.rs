//! Shared parameter sets for the criterion benchmarks.

use tongues_core::MathieuParams;

/// Representative in-gap points, one per tongue.
pub fn in_gap_points() -> Vec<(u32, MathieuParams)> {
    [(1, 0.25, 0.5), (2, 1.05, 0.5), (3, 2.265, 0.5)]
        .into_iter()
        .map(|(n, d, e)| (n, MathieuParams { delta: d, epsilon: e }))
        .collect()
}
