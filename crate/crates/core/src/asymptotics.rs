//! Large-`n` expansion of the zeros of `D_h` near `n pi`:
//! `z_n = n pi + a_1/n + a_3/n^3 + a_5/n^5 + O(n^-7)`.
//!
//! At `n = 400` the truncation error is around `1e-19`, far below the
//! spacing of `f64` numbers near `z_n`. Deviations `z_n - n pi` are therefore
//! solved and compared in double-double arithmetic.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{DdComplex, DoubleDouble};
use crate::error::{Error, Result};
use crate::secular::{k_eps_with_derivative, RobinTuple};
use crate::spectral::{find_roots, SearchRegion};
use crate::symmetric_poly::elem_sym_all;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCoefficients {
    pub a1: Complex64,
    pub a3: Complex64,
    pub a5: Complex64,
    /// `s_1(h) / (pi N)` in double-double, for residuals below `f64` resolution.
    #[serde(skip)]
    a1_dd: DdComplex,
}

impl ExpansionCoefficients {
    pub fn for_robin(h: &RobinTuple) -> Self {
        Self {
            a1: coeff_a1(h),
            a3: coeff_a3(h),
            a5: coeff_a5(h),
            a1_dd: coeff_a1_dd(h),
        }
    }

    /// `b_j = pi^j a_j`.
    pub fn b(&self, j: u32) -> Result<Complex64> {
        let a = match j {
            1 => self.a1,
            3 => self.a3,
            5 => self.a5,
            _ => return Err(Error::InvalidArgument(format!("no coefficient a_{j}"))),
        };
        Ok(a * PI.powi(j as i32))
    }

    /// `a_1/n + a_3/n^3 + a_5/n^5` in double-double.
    pub fn deviation(&self, n: u32) -> DdComplex {
        let nf = n as f64;
        let tail = self.a3 / nf.powi(3) + self.a5 / nf.powi(5);
        self.a1_dd.scale(DoubleDouble::from_f64(nf).recip()) + DdComplex::from(tail)
    }

    /// `n pi + deviation(n)`, rounded once.
    pub fn root(&self, n: u32) -> Complex64 {
        (self.deviation(n) + DdComplex::from_real(DoubleDouble::PI * n as f64)).to_complex()
    }

    pub fn conj(&self) -> Self {
        Self {
            a1: self.a1.conj(),
            a3: self.a3.conj(),
            a5: self.a5.conj(),
            a1_dd: DdComplex::new(self.a1_dd.re, -self.a1_dd.im),
        }
    }
}

/// `a_1 = s_1(h) / (pi N)`.
pub fn coeff_a1(h: &RobinTuple) -> Complex64 {
    h.values().iter().sum::<Complex64>() / (PI * h.edges() as f64)
}

fn coeff_a1_dd(h: &RobinTuple) -> DdComplex {
    let s1 = h
        .values()
        .iter()
        .fold(DdComplex::ZERO, |acc, &v| acc + DdComplex::from(v));
    s1.scale((DoubleDouble::PI * h.edges() as f64).recip())
}

/// `F_1(x_1) = -(3N - 2)/(3 pi^3 N^3) x_1^2 - 1/(pi^3 N^2) x_1`.
pub fn f1(x1: Complex64, n: usize) -> Complex64 {
    let nf = n as f64;
    let p3 = PI.powi(3);
    -x1 * x1 * (3.0 * nf - 2.0) / (3.0 * p3 * nf.powi(3)) - x1 / (p3 * nf * nf)
}

/// `F_2(x_1, x_2)`, the degree-four polynomial entering `a_5`.
pub fn f2(x1: Complex64, x2: Complex64, n: usize) -> Complex64 {
    let nf = n as f64;
    let p5 = PI.powi(5);
    let n3 = nf.powi(3);
    let n4 = nf.powi(4);
    let n5 = nf.powi(5);
    x1.powu(4) * (10.0 * nf * nf - 15.0 * nf + 6.0) / (5.0 * p5 * n5)
        + x1.powu(3) * (12.0 * nf - 8.0) / (3.0 * p5 * n4)
        - x1 * x1 * x2 * (7.0 * nf - 6.0) / (p5 * n4)
        + x1 * x1 * 2.0 / (p5 * n3)
        - x1 * x2 * 8.0 / (p5 * n3)
        + x2 * x2 * 4.0 / (p5 * n3)
}

/// `a_3 = s_1 F_1(s_1) + 2/(pi^3 N^2) s_1 s_2`.
pub fn coeff_a3(h: &RobinTuple) -> Complex64 {
    let n = h.edges();
    let s = elem_sym_all(h.tuple());
    let (s1, s2) = (s.get(1), s.get(2));
    s1 * f1(s1, n) + s1 * s2 * 2.0 / (PI.powi(3) * (n * n) as f64)
}

/// `a_5 = s_1 F_2(s_1, s_2) + 3/(pi^5 N^3) s_1^2 s_3`.
pub fn coeff_a5(h: &RobinTuple) -> Complex64 {
    let n = h.edges();
    let s = elem_sym_all(h.tuple());
    let (s1, s2, s3) = (s.get(1), s.get(2), s.get(3));
    s1 * f2(s1, s2, n) + s1 * s1 * s3 * 3.0 / (PI.powi(5) * (n * n * n) as f64)
}

/// `n pi + a_1/n + a_3/n^3 + a_5/n^5`.
pub fn predict_root(n: u32, h: &RobinTuple) -> Complex64 {
    let c = ExpansionCoefficients::for_robin(h);
    let nf = n as f64;
    Complex64::new(nf * PI, 0.0) + c.a1 / nf + c.a3 / nf.powi(3) + c.a5 / nf.powi(5)
}

/// `n >= 10 (1 + max |h_i|)`, the range in which the expansion has been checked.
pub fn is_validated_regime(n: u32, h: &RobinTuple) -> bool {
    n as f64 >= 10.0 * (1.0 + h.max_abs())
}

/// A zero `n pi + deviation` of the `n pi` series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRoot {
    pub n: u32,
    pub deviation: DdComplex,
}

impl SeriesRoot {
    pub fn from_z(n: u32, z: Complex64) -> Self {
        let npi = DoubleDouble::PI * n as f64;
        Self {
            n,
            deviation: DdComplex::from(z) - DdComplex::from_real(npi),
        }
    }

    pub fn z(&self) -> Complex64 {
        (self.deviation + DdComplex::from_real(DoubleDouble::PI * self.n as f64)).to_complex()
    }
}

fn k_eps_dd(h: &RobinTuple, eps: DoubleDouble, z: DdComplex) -> DdComplex {
    let (s, c) = z.sin_cos_small();
    let w = DdComplex::ONE + z.scale(eps);
    let hv: Vec<DdComplex> = h
        .values()
        .iter()
        .map(|&v| DdComplex::from(v).scale(eps))
        .collect();
    let mut total = DdComplex::ZERO;
    for (i, &ehi) in hv.iter().enumerate() {
        let mut term = -(w * s) + ehi * c;
        for (_, &ehj) in hv.iter().enumerate().filter(|&(j, _)| j != i) {
            term = term * (w * c + ehj * s);
        }
        total = total + term;
    }
    total
}

/// `z_n - n pi` as the zero of `K_{1/(n pi)}` nearest the origin, polished in
/// double-double from the first-order guess `a_1 / n`.
pub fn series_deviation(h: &RobinTuple, n: u32) -> Result<DdComplex> {
    series_deviation_from(h, n, coeff_a1(h) / n as f64)
}

/// As [`series_deviation`], starting Newton from `guess`.
pub fn series_deviation_from(h: &RobinTuple, n: u32, guess: Complex64) -> Result<DdComplex> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let eps = (DoubleDouble::PI * n as f64).recip();
    let eps64 = eps.to_f64();

    let mut x = guess;
    for _ in 0..60 {
        let (k, dk) = k_eps_with_derivative(h, eps64, x);
        if dk.norm() == 0.0 {
            break;
        }
        let step = k / dk;
        x -= step;
        if step.norm() <= 1e-16 * x.norm().max(1e-300) {
            break;
        }
    }

    let mut xd = DdComplex::from(x);
    let mut last = f64::INFINITY;
    for _ in 0..8 {
        let k = k_eps_dd(h, eps, xd);
        let (_, dk) = k_eps_with_derivative(h, eps64, xd.to_complex());
        if dk.norm() == 0.0 {
            return Err(Error::NonConvergence {
                region: format!("deviation near {n} pi"),
            });
        }
        let step = k / DdComplex::from(dk);
        xd = xd - step;
        let size = step.norm();
        if size <= 1e-31 * xd.norm().max(1e-300) || size == 0.0 {
            return Ok(xd);
        }
        if size >= last {
            break;
        }
        last = size;
    }
    if last <= 1e-28 * xd.norm().max(1e-300) {
        return Ok(xd);
    }
    Err(Error::NonConvergence {
        region: format!("deviation near {n} pi"),
    })
}

/// The `n pi` zero located by the argument-principle solver and then
/// refined in double-double.
///
/// The solver searches a square of half-width `0.5` around `n pi` and must
/// find exactly one simple zero; the refinement must stay within `1e3 tol`.
pub fn solve_series_root(h: &RobinTuple, n: u32, tol: f64) -> Result<SeriesRoot> {
    let center = Complex64::new(n as f64 * PI, 0.0);
    let region = SearchRegion::around(center, 0.5)?;
    let search = find_roots(h, &region, tol)?;
    let label = || format!("square of half-width 0.5 around {n} pi");
    if !search.is_complete() || search.points.len() != 1 || search.points[0].multiplicity != 1 {
        return Err(Error::NonConvergence { region: label() });
    }
    let z = search.points[0].z;
    let deviation = series_deviation_from(h, n, z - center)?;
    let root = SeriesRoot { n, deviation };
    if (root.z() - z).norm() > 1e3 * tol * z.norm().max(1.0) {
        return Err(Error::NonConvergence { region: label() });
    }
    Ok(root)
}

/// `|z_n - predict_root(n)|`, formed in double-double.
pub fn prediction_error(root: &SeriesRoot, coeffs: &ExpansionCoefficients) -> f64 {
    (root.deviation - coeffs.deviation(root.n)).norm()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFit {
    pub a1_hat: Complex64,
    pub a3_hat: Complex64,
    /// Least-squares slope of `log |z_n - predict_root(n)|` against `log n`.
    pub decay_exponent: f64,
    /// Whether the residuals decrease strictly with `n`.
    pub monotone: bool,
    /// `(n, |z_n - predict_root(n)|)` in increasing `n`.
    pub residuals: Vec<(u32, f64)>,
}

/// Richardson estimates of `a_1` and `a_3` from `n`/`2n` pairs, and the
/// decay rate of the truncated expansion.
///
/// `a1_hat` extrapolates `n (z_n - n pi)`; `a3_hat` extrapolates
/// `n^3 (z_n - n pi - a1_hat / n)`. Both use the largest available pair.
pub fn fit_coefficients(roots: &[SeriesRoot], h: &RobinTuple) -> Result<CoefficientFit> {
    let mut roots = roots.to_vec();
    roots.sort_by_key(|r| r.n);
    roots.dedup_by_key(|r| r.n);
    if roots.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "at least 4 distinct n are needed, got {}",
            roots.len()
        )));
    }
    let by_n = |n: u32| roots.iter().find(|r| r.n == n);
    let Some((lo, hi)) = roots
        .iter()
        .rev()
        .find_map(|r| by_n(2 * r.n).map(|d| (*r, *d)))
    else {
        return Err(Error::InvalidArgument(
            "no pair of roots with indices n and 2n".into(),
        ));
    };

    let g = |r: &SeriesRoot| r.deviation.scale(DoubleDouble::from_f64(r.n as f64));
    let a1_dd = richardson(g(&lo), g(&hi));
    let q = |r: &SeriesRoot| {
        let nf = r.n as f64;
        (g(r) - a1_dd).to_complex() * nf * nf
    };
    let a3_hat = (q(&hi) * 4.0 - q(&lo)) / 3.0;

    let coeffs = ExpansionCoefficients::for_robin(h);
    let residuals: Vec<(u32, f64)> = roots
        .iter()
        .map(|r| (r.n, prediction_error(r, &coeffs)))
        .collect();
    let monotone = residuals.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(CoefficientFit {
        a1_hat: a1_dd.to_complex(),
        a3_hat,
        decay_exponent: log_log_slope(&residuals),
        monotone,
        residuals,
    })
}

/// `(4 g(2n) - g(n)) / 3`, removing the `n^-2` term.
fn richardson(g_n: DdComplex, g_2n: DdComplex) -> DdComplex {
    let third = DoubleDouble::from_f64(3.0).recip();
    (g_2n.scale(DoubleDouble::from_f64(4.0)) - g_n).scale(third)
}

fn log_log_slope(points: &[(u32, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|&(n, r)| ((n as f64).ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        // all residuals vanish: the expansion is exact
        return f64::NEG_INFINITY;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn first_coefficient() {
        assert_eq!(coeff_a1(&RobinTuple::zeros(4).unwrap()), c(0., 0.));
        let h = RobinTuple::from_reals(&[1., 2., 3.]).unwrap();
        assert!(close(coeff_a1(&h), c(2.0 / PI, 0.), 1e-15));
        let single = RobinTuple::new(vec![c(0.3, -2.0)]).unwrap();
        assert!(close(coeff_a1(&single), c(0.3, -2.0) / PI, 1e-15));
    }

    #[test]
    fn polynomials_vanish_at_zero() {
        for n in 1..6 {
            assert_eq!(f1(c(0., 0.), n), c(0., 0.));
            assert_eq!(f2(c(0., 0.), c(0., 0.), n), c(0., 0.));
        }
        assert!(close(
            f1(c(1., 0.), 1),
            c(-4.0 / (3.0 * PI.powi(3)), 0.),
            1e-15
        ));
        // x2-free terms at N = 1: 1/5 + 4/3 + 2, over pi^5
        let expect = (0.2 + 4.0 / 3.0 + 2.0) / PI.powi(5);
        assert!(close(f2(c(1., 0.), c(0., 0.), 1), c(expect, 0.), 1e-15));
    }

    #[test]
    fn single_edge_third_coefficient() {
        // z tan z = h expanded by hand: a_3 = -a_1^3/3 - a_1^2/pi with a_1 = h/pi
        for h in [1.0, -0.4, 2.5] {
            let r = RobinTuple::from_reals(&[h]).unwrap();
            let a1 = h / PI;
            let expect = -a1.powi(3) / 3.0 - a1 * a1 / PI;
            assert!(close(coeff_a3(&r), c(expect, 0.), 1e-14), "h = {h}");
        }
        let one = RobinTuple::from_reals(&[1.0]).unwrap();
        assert!((coeff_a3(&one).re + 4.0 / (3.0 * PI.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn vanishing_sum_gives_exact_multiples() {
        let h = RobinTuple::new(vec![c(0., 1.), c(0., -1.)]).unwrap();
        assert_eq!(coeff_a3(&h), c(0., 0.));
        assert_eq!(coeff_a5(&h), c(0., 0.));
        for n in [1u32, 7, 50] {
            assert_eq!(predict_root(n, &h), c(n as f64 * PI, 0.));
            assert!(series_deviation(&h, n).unwrap().norm() < 1e-30);
        }
        assert_eq!(
            predict_root(9, &RobinTuple::zeros(3).unwrap()),
            c(9.0 * PI, 0.)
        );
    }

    #[test]
    fn coefficients_commute_with_conjugation() {
        let h =
            RobinTuple::new(vec![c(0.4, 1.1), c(-2.0, 0.3), c(0.7, -0.9), c(1.5, 0.0)]).unwrap();
        let a = ExpansionCoefficients::for_robin(&h);
        let b = ExpansionCoefficients::for_robin(&h.conj());
        let ac = a.conj();
        assert!(close(b.a1, ac.a1, 1e-14));
        assert!(close(b.a3, ac.a3, 1e-14));
        assert!(close(b.a5, ac.a5, 1e-14));

        let inv = RobinTuple::new(vec![c(0.0, 1.0), c(0.0, -1.0), c(0.5, 0.0)]).unwrap();
        let r = ExpansionCoefficients::for_robin(&inv);
        for j in [1, 3, 5] {
            assert!(r.b(j).unwrap().im.abs() < 1e-14);
        }
    }

    #[test]
    fn scalar_root_near_fifty_pi() {
        // z tan z = 1 near 50 pi, by Newton on z sin z - cos z
        let mut z = 50.0 * PI;
        for _ in 0..50 {
            let f = z * z.sin() - z.cos();
            let df = 2.0 * z.sin() + z * z.cos();
            z -= f / df;
        }
        let h = RobinTuple::from_reals(&[1.0]).unwrap();
        assert!((predict_root(50, &h) - c(z, 0.)).norm() <= 1e-10);
        assert!(is_validated_regime(50, &h));
        assert!(!is_validated_regime(19, &h));
    }

    #[test]
    fn deviation_solves_the_reduced_equation() {
        let h = RobinTuple::new(vec![c(1., 0.), c(0., 1.), c(0., 1.), c(0., -1.)]).unwrap();
        let dev = series_deviation(&h, 40).unwrap();
        let eps = (DoubleDouble::PI * 40.0).recip();
        assert!(k_eps_dd(&h, eps, dev).norm() < 1e-28);
        // the solver's zero agrees with n pi + deviation
        let root = solve_series_root(&h, 40, 1e-12).unwrap();
        assert!((root.deviation - dev).norm() < 1e-25);
    }

    #[test]
    fn truncation_error_decays_like_n_to_minus_seven() {
        let h = RobinTuple::from_reals(&[1.0, 2.0, 3.0]).unwrap();
        let coeffs = ExpansionCoefficients::for_robin(&h);
        let roots: Vec<SeriesRoot> = [50u32, 100, 200, 400]
            .iter()
            .map(|&n| SeriesRoot {
                n,
                deviation: series_deviation(&h, n).unwrap(),
            })
            .collect();
        for r in &roots {
            let scaled = prediction_error(r, &coeffs) * (r.n as f64).powi(7);
            assert!(scaled > 0.1 && scaled < 0.4, "n = {}: {scaled}", r.n);
        }
        let fit = fit_coefficients(&roots, &h).unwrap();
        assert!(fit.monotone);
        assert!(
            (fit.decay_exponent + 7.0).abs() < 0.2,
            "{}",
            fit.decay_exponent
        );
        assert!(close(fit.a1_hat, c(2.0 / PI, 0.), 1e-8));
        assert!(close(fit.a3_hat, coeffs.a3, 1e-4));
    }

    #[test]
    fn fit_needs_enough_points() {
        let h = RobinTuple::zeros(2).unwrap();
        let roots: Vec<SeriesRoot> = [10u32, 20, 40]
            .iter()
            .map(|&n| SeriesRoot::from_z(n, c(n as f64 * PI, 0.)))
            .collect();
        assert!(fit_coefficients(&roots, &h).is_err());
        let odd: Vec<SeriesRoot> = [11u32, 13, 17, 19]
            .iter()
            .map(|&n| SeriesRoot::from_z(n, c(n as f64 * PI, 0.)))
            .collect();
        assert!(fit_coefficients(&odd, &h).is_err());
    }

    #[test]
    fn fit_of_unperturbed_roots() {
        let h = RobinTuple::zeros(3).unwrap();
        let roots: Vec<SeriesRoot> = [25u32, 50, 100, 200]
            .iter()
            .map(|&n| SeriesRoot {
                n,
                deviation: series_deviation(&h, n).unwrap(),
            })
            .collect();
        let fit = fit_coefficients(&roots, &h).unwrap();
        assert!(fit.a1_hat.norm() < 1e-20);
        assert!(fit.a3_hat.norm() < 1e-12);
        assert_eq!(fit.decay_exponent, f64::NEG_INFINITY);
    }
}
