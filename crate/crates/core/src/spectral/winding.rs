//! Argument-principle zero counts of `D_h` along rectangle boundaries and circles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::secular::SecularEvaluator;

use super::SearchRegion;

/// Distance a winding integral may sit from an integer before it is rejected.
pub const INTEGER_SNAP_GUARD: f64 = 0.25;

const EDGE_QUADRATURE: QuadratureOptions = QuadratureOptions {
    abs_tol: 1e-6,
    rel_tol: 1e-10,
    max_intervals: 400,
};

/// `int_a^b D'/D dz` along the straight segment from `a` to `b`.
pub(crate) fn segment_integral(
    ev: &SecularEvaluator,
    a: Complex64,
    b: Complex64,
) -> Result<Complex64> {
    let d = b - a;
    let (v, _) = integrate(
        |t| ev.log_derivative(a + d * t) * d,
        0.0,
        1.0,
        EDGE_QUADRATURE,
    )?;
    Ok(v)
}

fn snap(integral: Complex64, what: &dyn Fn() -> String) -> Result<usize> {
    let w = integral / Complex64::new(0.0, 2.0 * PI);
    let k = w.re.round();
    if (w.re - k).abs() >= INTEGER_SNAP_GUARD || w.im.abs() >= INTEGER_SNAP_GUARD || k < 0.0 {
        return Err(Error::WindingFailed {
            region: what(),
            reason: format!("winding integral {w} is not near a non-negative integer"),
        });
    }
    Ok(k as usize)
}

/// Number of zeros of `D_h`, with multiplicity, inside `region`.
pub(crate) fn rectangle_winding(ev: &SecularEvaluator, region: &SearchRegion) -> Result<usize> {
    let corners = region.corners();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        total += segment_integral(ev, corners[k], corners[(k + 1) % 4]).map_err(|e| {
            Error::WindingFailed {
                region: region.to_string(),
                reason: e.to_string(),
            }
        })?;
    }
    snap(total, &|| region.to_string())
}

/// Number of zeros of `D_h`, with multiplicity, within `radius` of `center`.
pub(crate) fn circle_winding(
    ev: &SecularEvaluator,
    center: Complex64,
    radius: f64,
) -> Result<usize> {
    let opts = QuadratureOptions {
        abs_tol: 1e-4,
        rel_tol: 1e-8,
        max_intervals: 200,
    };
    let (v, _) = integrate(
        |t| {
            let e = Complex64::from_polar(radius, t);
            ev.log_derivative(center + e) * Complex64::new(0.0, 1.0) * e
        },
        0.0,
        2.0 * PI,
        opts,
    )?;
    snap(v, &|| format!("circle |z - {center}| = {radius:e}"))
}
