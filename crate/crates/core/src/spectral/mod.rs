//! Locating the zeros of `D_h` in a window of the `z`-plane.
//!
//! The window is cut into narrow tiles (after removing a small square
//! around `z = 0`, where `D_h` vanishes for `N >= 2` without an eigenvalue
//! behind it). Each tile is counted by the argument principle and split
//! into quadrants until Newton's method, started from a quadrant's centre,
//! lands on a point whose small-circle winding number accounts for the
//! whole quadrant count.

mod eigenfunction;
mod winding;
mod zero_mode;

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::secular::{RobinTuple, SecularEvaluator};

pub use eigenfunction::{
    defect_bilinear, defect_boundary, reconstruct_eigenfunction, vertex_residuals, Eigenfunction,
    VertexResiduals,
};
pub use winding::INTEGER_SNAP_GUARD;
pub use zero_mode::{zero_eigenvalue_test, zero_eigenvalue_test_with_tol, ZeroMode};

/// Axis-aligned rectangle in the `z`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchRegion {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidRegion(format!(
                "[{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// `re_min < Re z < re_max`, `|Im z| < im_band`.
    pub fn window(re_min: f64, re_max: f64, im_band: f64) -> Result<Self> {
        Self::new(re_min, re_max, -im_band, im_band)
    }

    /// Square of half-width `radius` centred at `center`.
    pub fn around(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(
            center.re - radius,
            center.re + radius,
            center.im - radius,
            center.im + radius,
        )
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_with_slack(z, 0.0)
    }

    fn contains_with_slack(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    /// Counter-clockwise corners starting bottom-left.
    pub(crate) fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn quadrants(&self, fx: f64, fy: f64) -> [SearchRegion; 4] {
        let xm = self.re_min + fx * self.width();
        let ym = self.im_min + fy * self.height();
        [
            SearchRegion {
                re_max: xm,
                im_max: ym,
                ..*self
            },
            SearchRegion {
                re_min: xm,
                im_max: ym,
                ..*self
            },
            SearchRegion {
                re_max: xm,
                im_min: ym,
                ..*self
            },
            SearchRegion {
                re_min: xm,
                im_min: ym,
                ..*self
            },
        ]
    }
}

impl fmt::Display for SearchRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.re_min, self.re_max, self.im_min, self.im_max
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Newton stops once a step is shorter than this.
    pub tol: f64,
    /// Half-width of the square around `z = 0` that is never searched.
    pub origin_radius: f64,
    pub max_newton_iter: usize,
    /// Tiles are at most this wide in `Re z`.
    pub max_tile_width: f64,
    pub max_depth: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            origin_radius: 0.1,
            max_newton_iter: 80,
            max_tile_width: 1.0,
            max_depth: 48,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Radius of the circle used to read off multiplicities.
    pub fn enclosure_radius(&self) -> f64 {
        (10.0 * self.tol).max(1e-8)
    }
}

/// One zero of `D_h`, or the zero eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub z: Complex64,
    pub lambda: Complex64,
    pub multiplicity: usize,
    /// `|D_h(z)| / max(1, |z|^N)`.
    pub residual: f64,
    pub enclosure_radius: f64,
}

impl SpectralPoint {
    fn new(
        ev: &SecularEvaluator,
        z: Complex64,
        multiplicity: usize,
        enclosure_radius: f64,
    ) -> Self {
        Self {
            z,
            lambda: z * z,
            multiplicity,
            residual: normalized_residual(ev, z),
            enclosure_radius,
        }
    }

    fn zero_mode(multiplicity: usize) -> Self {
        Self {
            z: Complex64::new(0.0, 0.0),
            lambda: Complex64::new(0.0, 0.0),
            multiplicity,
            residual: 0.0,
            enclosure_radius: 0.0,
        }
    }
}

/// `|D_h(z)| / max(1, |z|^N)`.
pub fn normalized_residual(ev: &SecularEvaluator, z: Complex64) -> f64 {
    ev.eval(z).norm() / z.norm().powi(ev.edges() as i32).max(1.0)
}

/// A subregion whose zeros could not all be resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionFailure {
    pub region: SearchRegion,
    pub expected: usize,
    pub found: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootSearch {
    /// Sorted by `Re z`, then `Im z`.
    pub points: Vec<SpectralPoint>,
    /// Zero count of the searched tiles (without the zero eigenvalue).
    pub count: usize,
    pub failures: Vec<RegionFailure>,
}

impl RootSearch {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    /// Sum of multiplicities over non-zero points.
    pub fn multiplicity_sum(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.z.norm() > 0.0)
            .map(|p| p.multiplicity)
            .sum()
    }
}

const SPLIT_FRACTIONS: [f64; 6] = [0.5, 0.4731, 0.5269, 0.4417, 0.5583, 0.3953];
const LINE_SHIFTS: [f64; 9] = [0.0, 1e-7, -1e-7, 3e-7, -3e-7, 6e-7, -6e-7, 1e-6, -1e-6];

fn line_is_clean(ev: &SecularEvaluator, a: Complex64, b: Complex64) -> bool {
    winding::segment_integral(ev, a, b).is_ok()
}

/// Outer boundary of `region`, each side nudged by at most `1e-6` until the
/// log-derivative integrates cleanly along it.
fn settle_boundary(ev: &SecularEvaluator, region: &SearchRegion) -> Result<SearchRegion> {
    let mut r = *region;
    let c = |x: f64, y: f64| Complex64::new(x, y);
    // Horizontal sides are checked against the unperturbed real extent first;
    // vertical sides afterwards against the settled imaginary extent.
    for side in 0..4 {
        let mut settled = false;
        for &shift in &LINE_SHIFTS {
            let ok = match side {
                0 => line_is_clean(
                    ev,
                    c(r.re_min, region.im_min + shift),
                    c(r.re_max, region.im_min + shift),
                ),
                1 => line_is_clean(
                    ev,
                    c(r.re_min, region.im_max + shift),
                    c(r.re_max, region.im_max + shift),
                ),
                2 => line_is_clean(
                    ev,
                    c(region.re_min + shift, r.im_min),
                    c(region.re_min + shift, r.im_max),
                ),
                _ => line_is_clean(
                    ev,
                    c(region.re_max + shift, r.im_min),
                    c(region.re_max + shift, r.im_max),
                ),
            };
            if ok {
                match side {
                    0 => r.im_min = region.im_min + shift,
                    1 => r.im_max = region.im_max + shift,
                    2 => r.re_min = region.re_min + shift,
                    _ => r.re_max = region.re_max + shift,
                }
                settled = true;
                break;
            }
        }
        if !settled {
            return Err(Error::WindingFailed {
                region: region.to_string(),
                reason: "a zero lies on the boundary and could not be avoided".into(),
            });
        }
    }
    Ok(r)
}

/// Splits `region` into pieces that avoid the square `|Re z|, |Im z| < r0`.
fn clip_origin(region: &SearchRegion, r0: f64) -> Vec<SearchRegion> {
    let overlaps =
        region.re_min < r0 && region.re_max > -r0 && region.im_min < r0 && region.im_max > -r0;
    if !overlaps || r0 <= 0.0 {
        return vec![*region];
    }
    let mut pieces = Vec::new();
    if region.re_min < -r0 {
        pieces.push(SearchRegion {
            re_max: -r0,
            ..*region
        });
    }
    if region.re_max > r0 {
        pieces.push(SearchRegion {
            re_min: r0,
            ..*region
        });
    }
    let mid = SearchRegion {
        re_min: region.re_min.max(-r0),
        re_max: region.re_max.min(r0),
        ..*region
    };
    if mid.im_min < -r0 {
        pieces.push(SearchRegion { im_max: -r0, ..mid });
    }
    if mid.im_max > r0 {
        pieces.push(SearchRegion { im_min: r0, ..mid });
    }
    pieces.retain(|p| p.width() > 0.0 && p.height() > 0.0);
    pieces
}

/// Cuts `piece` into tiles no wider than `max_width`, placing each interior
/// cut where the log-derivative integrates cleanly.
fn tile(ev: &SecularEvaluator, piece: &SearchRegion, max_width: f64) -> Vec<SearchRegion> {
    let count = (piece.width() / max_width).ceil().max(1.0) as usize;
    let step = piece.width() / count as f64;
    let mut cuts = vec![piece.re_min];
    for k in 1..count {
        let nominal = piece.re_min + k as f64 * step;
        let x = [0.0, 0.0137, -0.0137, 0.0291, -0.0291, 0.0533]
            .iter()
            .map(|f| nominal + f * step)
            .find(|&x| {
                line_is_clean(
                    ev,
                    Complex64::new(x, piece.im_min),
                    Complex64::new(x, piece.im_max),
                )
            })
            .unwrap_or(nominal);
        cuts.push(x);
    }
    cuts.push(piece.re_max);
    cuts.windows(2)
        .map(|w| SearchRegion {
            re_min: w[0],
            re_max: w[1],
            ..*piece
        })
        .collect()
}

fn prepare_tiles(
    ev: &SecularEvaluator,
    region: &SearchRegion,
    opts: &SolverOptions,
) -> Result<Vec<SearchRegion>> {
    let outer = settle_boundary(ev, region)?;
    let mut r0 = opts.origin_radius;
    let pieces = loop {
        let pieces = clip_origin(&outer, r0);
        let clean = pieces.iter().all(|p| {
            p.corners().iter().enumerate().all(|(k, &a)| {
                let b = p.corners()[(k + 1) % 4];
                // only cuts introduced by the origin square need checking here
                let on_cut = (a.re.abs() == r0 && b.re.abs() == r0)
                    || (a.im.abs() == r0 && b.im.abs() == r0);
                !on_cut || line_is_clean(ev, a, b)
            })
        });
        if clean || r0 > 1.5 * opts.origin_radius {
            break pieces;
        }
        r0 *= 1.05;
    };
    Ok(pieces
        .iter()
        .flat_map(|p| tile(ev, p, opts.max_tile_width))
        .collect())
}

/// Number of zeros of `D_h`, with multiplicity, in `region` minus the origin square.
pub fn count_zeros(h: &RobinTuple, region: &SearchRegion) -> Result<usize> {
    count_zeros_with(h, region, &SolverOptions::default())
}

pub fn count_zeros_with(
    h: &RobinTuple,
    region: &SearchRegion,
    opts: &SolverOptions,
) -> Result<usize> {
    let ev = SecularEvaluator::new(h.clone());
    let tiles = prepare_tiles(&ev, region, opts)?;
    tiles
        .par_iter()
        .map(|t| winding::rectangle_winding(&ev, t))
        .sum()
}

struct TileOutcome {
    count: usize,
    points: Vec<SpectralPoint>,
    failures: Vec<RegionFailure>,
}

fn newton(
    ev: &SecularEvaluator,
    start: Complex64,
    multiplicity: usize,
    region: &SearchRegion,
    opts: &SolverOptions,
) -> Option<Complex64> {
    let reach = region.diameter();
    let mut z = start;
    for _ in 0..opts.max_newton_iter {
        let (d, dd) = ev.eval_with_derivative(z);
        if d.norm() == 0.0 {
            return Some(z);
        }
        let mut step = d / dd * multiplicity as f64;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        if step.norm() > reach {
            step *= reach / step.norm();
        }
        z -= step;
        if !region.contains_with_slack(z, reach) {
            return None;
        }
        if step.norm() <= opts.tol.max(4.0 * f64::EPSILON * z.norm()) {
            return Some(z);
        }
    }
    None
}

fn resolve(
    ev: &SecularEvaluator,
    region: SearchRegion,
    count: usize,
    depth: usize,
    opts: &SolverOptions,
    out: &mut TileOutcome,
) {
    if count == 0 {
        return;
    }
    let radius = opts.enclosure_radius();
    if let Some(z) = newton(ev, region.center(), count, &region, opts) {
        let slack = 1e-9 * z.norm().max(1.0);
        if region.contains_with_slack(z, slack) {
            if let Ok(k) = winding::circle_winding(ev, z, radius) {
                if k == count {
                    out.points.push(SpectralPoint::new(ev, z, k, radius));
                    return;
                }
            }
        }
    }

    let fail = |out: &mut TileOutcome, reason: &str| {
        out.failures.push(RegionFailure {
            region,
            expected: count,
            found: 0,
            reason: reason.to_string(),
        })
    };
    if depth >= opts.max_depth || region.diameter() < 1e-11 * region.center().norm().max(1.0) {
        fail(out, "subdivision limit reached");
        return;
    }
    for &fx in &SPLIT_FRACTIONS {
        let fy = 1.0 - fx;
        let quads = region.quadrants(fx, fy);
        let counts: Result<Vec<usize>> = quads
            .iter()
            .map(|q| winding::rectangle_winding(ev, q))
            .collect();
        if let Ok(counts) = counts {
            if counts.iter().sum::<usize>() == count {
                for (q, c) in quads.into_iter().zip(counts) {
                    resolve(ev, q, c, depth + 1, opts, out);
                }
                return;
            }
        }
    }
    fail(out, "no clean subdivision found");
}

fn search_tile(ev: &SecularEvaluator, region: SearchRegion, opts: &SolverOptions) -> TileOutcome {
    let mut out = TileOutcome {
        count: 0,
        points: Vec::new(),
        failures: Vec::new(),
    };
    match winding::rectangle_winding(ev, &region) {
        Ok(count) => {
            out.count = count;
            resolve(ev, region, count, 0, opts, &mut out);
            let found: usize = out.points.iter().map(|p| p.multiplicity).sum();
            if found != count && out.failures.is_empty() {
                out.failures.push(RegionFailure {
                    region,
                    expected: count,
                    found,
                    reason: "multiplicities do not add up to the zero count".into(),
                });
            }
        }
        Err(e) => out.failures.push(RegionFailure {
            region,
            expected: 0,
            found: 0,
            reason: e.to_string(),
        }),
    }
    out
}

/// Maps `z` to the representative of `{z, -z}` with `Re z >= 0`
/// (`Im z >= 0` on the imaginary axis).
pub fn canonical(z: Complex64) -> Complex64 {
    let tiny = 1e-10 * z.norm();
    if z.re < -tiny || (z.re.abs() <= tiny && z.im < 0.0) {
        -z
    } else {
        z
    }
}

fn order(a: &SpectralPoint, b: &SpectralPoint) -> std::cmp::Ordering {
    a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im))
}

/// All zeros of `D_h` in `region`, away from the origin square.
pub fn find_roots(h: &RobinTuple, region: &SearchRegion, tol: f64) -> Result<RootSearch> {
    find_roots_with(h, region, &SolverOptions::with_tol(tol))
}

pub fn find_roots_with(
    h: &RobinTuple,
    region: &SearchRegion,
    opts: &SolverOptions,
) -> Result<RootSearch> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let ev = SecularEvaluator::new(h.clone());
    let tiles = prepare_tiles(&ev, region, opts)?;
    let outcomes: Vec<TileOutcome> = tiles
        .par_iter()
        .map(|t| search_tile(&ev, *t, opts))
        .collect();

    let mut result = RootSearch::default();
    for o in outcomes {
        result.count += o.count;
        result.points.extend(o.points);
        result.failures.extend(o.failures);
    }
    for p in &mut result.points {
        p.z = canonical(p.z);
        p.lambda = p.z * p.z;
    }
    result.points.sort_by(order);

    // A point found from both sides of the imaginary axis is kept once.
    let mut unique: Vec<SpectralPoint> = Vec::with_capacity(result.points.len());
    for p in result.points {
        let dup = unique
            .iter_mut()
            .find(|q| (q.z - p.z).norm() <= 1e-8 * p.z.norm().max(1.0));
        match dup {
            Some(q) => q.multiplicity = q.multiplicity.max(p.multiplicity),
            None => unique.push(p),
        }
    }
    result.points = unique;
    result.failures.sort_by(|a, b| {
        a.region
            .re_min
            .total_cmp(&b.region.re_min)
            .then(a.region.im_min.total_cmp(&b.region.im_min))
    });
    Ok(result)
}

/// Eigenvalues `lambda = z^2` from the zeros in `region`.
///
/// `lambda = 0` is appended when the zero-eigenvalue test passes and the
/// window reaches the origin square (`re_min <= r0` and `0` within the
/// imaginary range), since the root search itself never looks there.
pub fn spectrum(h: &RobinTuple, region: &SearchRegion, tol: f64) -> Result<RootSearch> {
    spectrum_with(h, region, &SolverOptions::with_tol(tol))
}

pub fn spectrum_with(
    h: &RobinTuple,
    region: &SearchRegion,
    opts: &SolverOptions,
) -> Result<RootSearch> {
    let mut result = find_roots_with(h, region, opts)?;
    let reaches_origin =
        region.re_min <= opts.origin_radius && region.im_min <= 0.0 && region.im_max >= 0.0;
    if reaches_origin {
        let zero = zero_eigenvalue_test(h);
        if zero.present {
            result
                .points
                .insert(0, SpectralPoint::zero_mode(zero.multiplicity));
        }
    }
    Ok(result)
}
