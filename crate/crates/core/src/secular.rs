//! The secular function `D_h(z)` of the star graph with Robin ends.
//!
//! With `u_i(x) = A_i cos(zx) + B_i sin(zx)` on each edge, the Robin
//! condition fixes `B_i = h_i A_i / z` and the central vertex conditions
//! leave an `N x N` linear system in `A`. Its determinant is `D_h(z)`; the
//! non-zero eigenvalues are `lambda = z^2` at its roots.
//!
//! Three algebraically equivalent evaluations are provided:
//!
//! * [`d_det`]: the determinant of the linear system, by elimination.
//! * [`d_sum`]: `sum_i beta_i(z) prod_{j != i} alpha_j(z)`.
//! * [`d_compact`]: the expansion in elementary symmetric polynomials of `h`.
//!
//! `d_sum` is the production form; the other two exist to cross-check it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::symmetric_poly::{elem_sym_all, ComplexTuple, SymmetricPolyVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Robin parameters `h_1, ..., h_N`, one per edge (unit edge length).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RobinTuple(ComplexTuple);

impl RobinTuple {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        Ok(Self(ComplexTuple::new(values)?))
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Ok(Self(ComplexTuple::from_reals(values)?))
    }

    /// `N` zero parameters: Neumann ends.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![ZERO; n])
    }

    /// Edge count `N`.
    pub fn edges(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Complex64] {
        self.0.values()
    }

    pub fn tuple(&self) -> &ComplexTuple {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }
}

impl From<ComplexTuple> for RobinTuple {
    fn from(t: ComplexTuple) -> Self {
        Self(t)
    }
}

/// `alpha_h(z) = z cos z + h sin z`, proportional to the edge value at the centre.
pub fn alpha(h: Complex64, z: Complex64) -> Complex64 {
    z * z.cos() + h * z.sin()
}

/// `beta_h(z) = -z sin z + h cos z`, proportional to the edge derivative at the centre.
pub fn beta(h: Complex64, z: Complex64) -> Complex64 {
    -z * z.sin() + h * z.cos()
}

fn alpha_prime(h: Complex64, z: Complex64) -> Complex64 {
    (ONE + h) * z.cos() - z * z.sin()
}

fn beta_prime(h: Complex64, z: Complex64) -> Complex64 {
    -(ONE + h) * z.sin() - z * z.cos()
}

/// The matrix whose determinant is `D_h(z)`: continuity rows
/// `alpha_i A_i - alpha_{i+1} A_{i+1} = 0` followed by the Kirchhoff row
/// `sum_i beta_i A_i = 0`.
pub(crate) fn secular_matrix(h: &RobinTuple, z: Complex64) -> Matrix {
    let n = h.edges();
    let hv = h.values();
    let mut m = Matrix::zeros(n);
    for i in 0..n - 1 {
        m[(i, i)] = alpha(hv[i], z);
        m[(i, i + 1)] = -alpha(hv[i + 1], z);
    }
    for (j, &hj) in hv.iter().enumerate() {
        m[(n - 1, j)] = beta(hj, z);
    }
    m
}

/// `D_h(z)` as the determinant of the secular matrix.
pub fn d_det(h: &RobinTuple, z: Complex64) -> Complex64 {
    linalg::determinant(secular_matrix(h, z))
}

/// `D_h(z) = sum_i beta_i(z) prod_{j != i} alpha_j(z)`, with no division.
pub fn d_sum(h: &RobinTuple, z: Complex64) -> Complex64 {
    let a: Vec<Complex64> = h.values().iter().map(|&hi| alpha(hi, z)).collect();
    let n = a.len();
    // suffix[i] = prod_{j >= i} a_j
    let mut suffix = vec![ONE; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] * a[i];
    }
    let mut prefix = ONE;
    let mut total = ZERO;
    for (i, &hi) in h.values().iter().enumerate() {
        total += beta(hi, z) * prefix * suffix[i + 1];
        prefix *= a[i];
    }
    total
}

/// `f_k(z) = (k - N sin^2 z) sin^{k-1} z cos^{N-k-1} z` for `1 <= k <= N`.
///
/// At `k = N` the cosine power would be negative; the equivalent entire form
/// `N cos z sin^{N-1} z` is used instead.
pub fn f_k(k: usize, n: usize, z: Complex64) -> Result<Complex64> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let (s, c) = (z.sin(), z.cos());
    if k == n {
        return Ok(c * s.powu(n as u32 - 1) * n as f64);
    }
    let lead = Complex64::new(k as f64, 0.0) - s * s * n as f64;
    Ok(lead * s.powu(k as u32 - 1) * c.powu((n - k - 1) as u32))
}

/// `D_h(z)` in the symmetric-polynomial form
/// `-N z^N sin z cos^{N-1} z + z^N sum_k s_k(h) z^{-k} f_k(z)`.
pub fn d_compact(h: &RobinTuple, z: Complex64) -> Result<Complex64> {
    d_compact_with(h.edges(), &elem_sym_all(h.tuple()), z)
}

fn d_compact_with(n: usize, s: &SymmetricPolyVector, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Err(Error::DegenerateInput);
    }
    let mut total = d_unperturbed(n, z);
    // z^N s_k / z^k = s_k z^{N-k}; accumulate powers upward from k = N.
    let mut zpow = ONE;
    for k in (1..=n).rev() {
        total += s.get(k) * zpow * f_k(k, n, z)?;
        zpow *= z;
    }
    Ok(total)
}

/// `D_0(z) = -N z^N sin z cos^{N-1} z`, the secular function with all `h_i = 0`.
pub fn d_unperturbed(n: usize, z: Complex64) -> Complex64 {
    -z.powu(n as u32) * z.sin() * z.cos().powu(n as u32 - 1) * n as f64
}

/// `K_eps(z) = sum_i [-(1 + eps z) sin z + eps h_i cos z]
///                  * prod_{j != i} [(1 + eps z) cos z + eps h_j sin z]`.
///
/// For `eps = 1/(n pi)`, `D_h(n pi + z) = (-1)^{nN} (n pi)^N K_eps(z)`.
pub fn k_eps(h: &RobinTuple, eps: f64, z: Complex64) -> Complex64 {
    let (s, c) = (z.sin(), z.cos());
    let w = ONE + z * eps;
    let a: Vec<Complex64> = h.values().iter().map(|&hj| w * c + hj * s * eps).collect();
    let n = a.len();
    let mut suffix = vec![ONE; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] * a[i];
    }
    let mut prefix = ONE;
    let mut total = ZERO;
    for (i, &hi) in h.values().iter().enumerate() {
        total += (-w * s + hi * c * eps) * prefix * suffix[i + 1];
        prefix *= a[i];
    }
    total
}

/// `K_eps(z)` and its derivative in `z`.
pub fn k_eps_with_derivative(h: &RobinTuple, eps: f64, z: Complex64) -> (Complex64, Complex64) {
    let (s, c) = (z.sin(), z.cos());
    let w = ONE + z * eps;
    let hv = h.values();
    let mut k = ZERO;
    let mut dk = ZERO;
    for (i, &hi) in hv.iter().enumerate() {
        let (mut p, mut dp) = (ONE, ZERO);
        for (_, &hj) in hv.iter().enumerate().filter(|&(j, _)| j != i) {
            let b = w * c + hj * s * eps;
            let db = c * eps - w * s + hj * c * eps;
            dp = dp * b + p * db;
            p *= b;
        }
        let a = -w * s + hi * c * eps;
        let da = -s * eps - w * c - hi * s * eps;
        k += a * p;
        dk += da * p + a * dp;
    }
    (k, dk)
}

/// `D_h(z)` and `D_h'(z)`, the derivative taken term by term.
pub fn d_with_derivative(h: &RobinTuple, z: Complex64) -> (Complex64, Complex64) {
    let hv = h.values();
    let a: Vec<Complex64> = hv.iter().map(|&hi| alpha(hi, z)).collect();
    let da: Vec<Complex64> = hv.iter().map(|&hi| alpha_prime(hi, z)).collect();
    let mut d = ZERO;
    let mut dd = ZERO;
    for (i, &hi) in hv.iter().enumerate() {
        // (prod_{j != i} a_j, its derivative)
        let (mut p, mut dp) = (ONE, ZERO);
        for j in (0..a.len()).filter(|&j| j != i) {
            dp = dp * a[j] + p * da[j];
            p *= a[j];
        }
        let (b, db) = (beta(hi, z), beta_prime(hi, z));
        d += b * p;
        dd += db * p + b * dp;
    }
    (d, dd)
}

/// Evaluator bound to one Robin tuple, with `s_k(h)` precomputed.
#[derive(Debug, Clone)]
pub struct SecularEvaluator {
    h: RobinTuple,
    s: SymmetricPolyVector,
}

impl SecularEvaluator {
    pub fn new(h: RobinTuple) -> Self {
        let s = elem_sym_all(h.tuple());
        Self { h, s }
    }

    pub fn robin(&self) -> &RobinTuple {
        &self.h
    }

    pub fn symmetric(&self) -> &SymmetricPolyVector {
        &self.s
    }

    pub fn edges(&self) -> usize {
        self.h.edges()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        d_sum(&self.h, z)
    }

    pub fn eval_det(&self, z: Complex64) -> Complex64 {
        d_det(&self.h, z)
    }

    pub fn eval_compact(&self, z: Complex64) -> Result<Complex64> {
        d_compact_with(self.h.edges(), &self.s, z)
    }

    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        d_with_derivative(&self.h, z)
    }

    /// `D'(z) / D(z)`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let (d, dd) = self.eval_with_derivative(z);
        dd / d
    }

    pub fn k_eps(&self, eps: f64, z: Complex64) -> Complex64 {
        k_eps(&self.h, eps, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300) + 1e-12
    }

    #[test]
    fn alpha_beta_special_values() {
        let h = c(0.7, -1.3);
        let z = c(2.1, 0.4);
        assert_eq!(alpha(h, ZERO), ZERO);
        assert_eq!(alpha(ZERO, z), z * z.cos());
        assert!((alpha(h, c(FRAC_PI_2, 0.)) - h).norm() < 1e-15);
        assert_eq!(beta(h, ZERO), h);
        assert!((beta(h, c(FRAC_PI_2, 0.)) - c(-FRAC_PI_2, 0.)).norm() < 1e-15);
        assert_eq!(beta(ZERO, z), -z * z.sin());
    }

    #[test]
    fn unperturbed_root_at_pi() {
        let h = RobinTuple::zeros(3).unwrap();
        assert!(d_det(&h, c(PI, 0.)).norm() < 1e-12);
        assert!(d_sum(&h, c(PI, 0.)).norm() < 1e-12);
    }

    #[test]
    fn single_edge_is_beta() {
        let h = RobinTuple::new(vec![c(0.3, 2.0)]).unwrap();
        let z = c(1.7, -0.2);
        assert_eq!(d_det(&h, z), beta(h.values()[0], z));
        assert_eq!(d_sum(&h, z), beta(h.values()[0], z));
        assert!(close(
            d_compact(&h, z).unwrap(),
            beta(h.values()[0], z),
            1e-14
        ));
    }

    #[test]
    fn forms_agree_at_a_point() {
        let h = RobinTuple::new(vec![c(1., 2.), c(-0.5, 0.), c(3., -1.), c(0., 0.25)]).unwrap();
        let z = c(7.3, 0.6);
        let (a, b, cc) = (d_det(&h, z), d_sum(&h, z), d_compact(&h, z).unwrap());
        assert!(close(a, b, 1e-12), "{a} vs {b}");
        assert!(close(b, cc, 1e-12), "{b} vs {cc}");
    }

    #[test]
    fn sum_form_at_multiples_of_pi() {
        let h = RobinTuple::new(vec![c(1., 2.), c(-0.5, 0.), c(3., -1.)]).unwrap();
        let s1: Complex64 = h.values().iter().sum();
        for n in 1..=5i32 {
            let z = c(n as f64 * PI, 0.);
            let sign = if (n * 3) % 2 == 0 { 1.0 } else { -1.0 };
            let expected = s1 * (n as f64 * PI).powi(2) * sign;
            assert!(close(d_sum(&h, z), expected, 1e-12));
        }
        let paired = RobinTuple::new(vec![c(0., 1.), c(0., -1.)]).unwrap();
        for n in 1..=5 {
            let z = c(n as f64 * PI, 0.);
            assert!(d_compact(&paired, z).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn zero_robin_reduces_to_closed_form() {
        let h = RobinTuple::zeros(4).unwrap();
        let z = c(2.2, -0.7);
        assert!(close(d_sum(&h, z), d_unperturbed(4, z), 1e-14));
        assert!(close(d_compact(&h, z).unwrap(), d_unperturbed(4, z), 1e-14));
    }

    #[test]
    fn origin_behaviour() {
        let h = RobinTuple::new(vec![c(1., 0.), c(2., 1.)]).unwrap();
        assert_eq!(d_sum(&h, ZERO), ZERO);
        assert_eq!(d_compact(&h, ZERO), Err(Error::DegenerateInput));
    }

    #[test]
    fn f_k_special_values() {
        for n in 2..6 {
            assert!((f_k(1, n, ZERO).unwrap() - ONE).norm() < 1e-15);
            let z = c(FRAC_PI_2, 0.);
            assert!((f_k(n - 1, n, z).unwrap() - c(-1., 0.)).norm() < 1e-14);
        }
        let z = c(0.9, 0.3);
        let n = 4;
        // the generic formula, with the negative cosine power written out
        let generic = (c(n as f64, 0.) - z.sin() * z.sin() * n as f64) * z.sin().powu(3) / z.cos();
        assert!(close(f_k(n, n, z).unwrap(), generic, 1e-14));
        assert_eq!(f_k(0, 3, z), Err(Error::KOutOfRange { k: 0, n: 3 }));
        assert_eq!(f_k(4, 3, z), Err(Error::KOutOfRange { k: 4, n: 3 }));
    }

    #[test]
    fn k_eps_shifted_secular() {
        let h = RobinTuple::new(vec![c(1., 2.), c(-0.5, 0.), c(3., -1.)]).unwrap();
        let z = c(0.05, -0.02);
        for n in [1u32, 4, 11] {
            let npi = n as f64 * PI;
            let sign = if (n * 3) % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = d_sum(&h, z + npi);
            let rhs = k_eps(&h, 1.0 / npi, z) * npi.powi(3) * sign;
            assert!(close(lhs, rhs, 1e-10), "n={n}: {lhs} vs {rhs}");
        }
        let zero = RobinTuple::zeros(3).unwrap();
        let eps = 0.1;
        let w = ONE + z * eps;
        let expected = -w.powu(3) * z.sin() * z.cos().powu(2) * 3.0;
        assert!(close(k_eps(&zero, eps, z), expected, 1e-14));
    }

    #[test]
    fn k_eps_derivative_matches_difference_quotient() {
        let h = RobinTuple::new(vec![c(1., 2.), c(-0.5, 0.)]).unwrap();
        let (z, eps, step) = (c(0.02, 0.01), 0.03, 1e-6);
        let fd = (k_eps(&h, eps, z + step) - k_eps(&h, eps, z - step)) / (2.0 * step);
        let (k, dk) = k_eps_with_derivative(&h, eps, z);
        assert_eq!(k, k_eps(&h, eps, z));
        assert!(close(dk, fd, 1e-8), "{dk} vs {fd}");
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let h = RobinTuple::new(vec![c(1., 2.), c(-0.5, 0.), c(3., -1.)]).unwrap();
        let z = c(4.1, 0.3);
        let step = 1e-6;
        let fd = (d_sum(&h, z + step) - d_sum(&h, z - step)) / (2.0 * step);
        let (_, d1) = d_with_derivative(&h, z);
        assert!(close(d1, fd, 1e-7), "{d1} vs {fd}");
    }
}
