use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::secular::{alpha, secular_matrix, RobinTuple};
use crate::symmetric_poly::ComplexTuple;

/// `u_i(x) = A_i cos(zx) + B_i sin(zx)` on edge `i`, `x = 0` at the Robin end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenfunction {
    pub a: ComplexTuple,
    pub b: ComplexTuple,
    pub z: Complex64,
}

impl Eigenfunction {
    /// Builds `u` from cosine amplitudes, with `B_i = h_i A_i / z`.
    pub fn from_amplitudes(h: &RobinTuple, a: Vec<Complex64>, z: Complex64) -> Result<Self> {
        if a.len() != h.edges() {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {} edges",
                a.len(),
                h.edges()
            )));
        }
        if z.norm() == 0.0 {
            return Err(Error::DegenerateInput);
        }
        let b = a
            .iter()
            .zip(h.values())
            .map(|(&ai, &hi)| hi * ai / z)
            .collect();
        Ok(Self {
            a: ComplexTuple::new(a)?,
            b: ComplexTuple::new(b)?,
            z,
        })
    }

    pub fn edges(&self) -> usize {
        self.a.len()
    }

    pub fn value(&self, edge: usize, x: f64) -> Complex64 {
        let zx = self.z * x;
        self.a[edge] * zx.cos() + self.b[edge] * zx.sin()
    }

    pub fn derivative(&self, edge: usize, x: f64) -> Complex64 {
        let zx = self.z * x;
        self.z * (-self.a[edge] * zx.sin() + self.b[edge] * zx.cos())
    }

    pub fn second_derivative(&self, edge: usize, x: f64) -> Complex64 {
        let zx = self.z * x;
        -self.z * self.z * (self.a[edge] * zx.cos() + self.b[edge] * zx.sin())
    }
}

/// Eigenfunction of `L_h` for a zero `z` of `D_h`.
///
/// The amplitudes span the null space of the secular matrix (full-pivot
/// elimination), scaled so that `max |A_i| = 1`. When every `alpha_i(z)` is
/// non-zero the null space is one-dimensional and `A_i` is proportional to
/// `1 / alpha_i(z)`; that closed form is returned after checking it against
/// the elimination result.
pub fn reconstruct_eigenfunction(h: &RobinTuple, z: Complex64) -> Result<Eigenfunction> {
    if z.norm() == 0.0 {
        return Err(Error::DegenerateInput);
    }
    let n = h.edges();
    // Natural size of the alpha/beta entries, independent of how close to a root z is.
    let scale = (z.norm() + h.max_abs()) * z.cos().norm().max(z.sin().norm());
    let ns = linalg::null_space(secular_matrix(h, z), scale, 1e-7);
    let Some(first) = ns.basis.first() else {
        return Err(Error::NotARoot {
            z: z.to_string(),
            pivot: ns.smallest_pivot,
        });
    };
    let mut a = normalize(first.clone());

    let alphas: Vec<Complex64> = h.values().iter().map(|&hi| alpha(hi, z)).collect();
    if n > 1 && alphas.iter().all(|v| v.norm() > 1e-6 * scale) {
        if ns.basis.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "null space of dimension {} with all alpha_i non-zero at z = {z}",
                ns.basis.len()
            )));
        }
        let closed = normalize(alphas.iter().map(|v| v.inv()).collect());
        let gap = closed
            .iter()
            .zip(&a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        if gap > 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "null vector disagrees with 1/alpha form by {gap:e} at z = {z}"
            )));
        }
        a = closed;
    }
    Eigenfunction::from_amplitudes(h, a, z)
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or_default();
    if pivot.norm() > 0.0 {
        for x in &mut v {
            *x /= pivot;
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexResiduals {
    /// `max_{i,j} |u_i(1) - u_j(1)|`
    pub continuity: f64,
    /// `|sum_i u_i'(1)|`
    pub kirchhoff: f64,
    /// `max_i |u_i'(0) - h_i u_i(0)|`
    pub robin: f64,
}

impl VertexResiduals {
    pub fn max(&self) -> f64 {
        self.continuity.max(self.kirchhoff).max(self.robin)
    }
}

pub fn vertex_residuals(u: &Eigenfunction, h: &RobinTuple) -> VertexResiduals {
    let n = u.edges();
    let ends: Vec<Complex64> = (0..n).map(|i| u.value(i, 1.0)).collect();
    let mut continuity: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            continuity = continuity.max((ends[i] - ends[j]).norm());
        }
    }
    let kirchhoff = (0..n)
        .map(|i| u.derivative(i, 1.0))
        .sum::<Complex64>()
        .norm();
    let robin = h
        .values()
        .iter()
        .enumerate()
        .map(|(i, &hi)| (u.derivative(i, 0.0) - hi * u.value(i, 0.0)).norm())
        .fold(0.0, f64::max);
    VertexResiduals {
        continuity,
        kirchhoff,
        robin,
    }
}

/// `<L u, v> - <u, L v>` by quadrature of
/// `sum_i int_0^1 conj(-u_i'') v_i - conj(u_i) (-v_i'') dx`.
pub fn defect_bilinear(u: &Eigenfunction, v: &Eigenfunction, h: &RobinTuple) -> Result<Complex64> {
    if u.edges() != h.edges() || v.edges() != h.edges() {
        return Err(Error::InvalidArgument("edge counts differ".into()));
    }
    let opts = QuadratureOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_intervals: 500,
    };
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..h.edges() {
        let (lu_v, _) = integrate(
            |x| -u.second_derivative(i, x).conj() * v.value(i, x),
            0.0,
            1.0,
            opts,
        )?;
        let (u_lv, _) = integrate(
            |x| u.value(i, x).conj() * -v.second_derivative(i, x),
            0.0,
            1.0,
            opts,
        )?;
        total += lu_v - u_lv;
    }
    Ok(total)
}

/// Closed form of the defect: `sum_i (conj h_i - h_i) conj(u_i(0)) v_i(0)`.
pub fn defect_boundary(u: &Eigenfunction, v: &Eigenfunction, h: &RobinTuple) -> Complex64 {
    h.values()
        .iter()
        .enumerate()
        .map(|(i, &hi)| (hi.conj() - hi) * u.value(i, 0.0).conj() * v.value(i, 0.0))
        .sum()
}
