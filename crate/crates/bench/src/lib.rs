//! Shared inputs for the benchmarks.

use num_complex::Complex64;
use robinstar::secular::RobinTuple;

/// `N` parameters spread over the disk of radius 3, reproducible without an RNG.
pub fn robin_tuple(n: usize) -> RobinTuple {
    let values = (0..n)
        .map(|k| {
            let t = k as f64 + 1.0;
            Complex64::from_polar(3.0 * (0.37 * t).sin().abs(), 2.399_963 * t)
        })
        .collect();
    RobinTuple::new(values).expect("finite parameters")
}

/// Points along a diagonal of the window `0 < Re z < 40`, `|Im z| < 2`.
pub fn sample_points(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let t = (k as f64 + 0.5) / count as f64;
            Complex64::new(40.0 * t, 4.0 * t - 2.0)
        })
        .collect()
}
