//! Elementary symmetric polynomials of complex tuples.
//!
//! `s_m(c)` is the sum of all products of `m` distinct entries of `c`, with
//! `s_0 = 1` and `s_m = 0` for `m > N`. Values are built by expanding
//! `prod_j (x + c_j)` one factor at a time, which costs `O(N^2)` and never
//! divides.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for reality and pairing decisions.
pub const DEFAULT_REALITY_TOL: f64 = 1e-9;

/// An ordered, non-empty list of finite complex numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexTuple(Vec<Complex64>);

impl ComplexTuple {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if let Some(index) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    /// Builds a tuple of real entries.
    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|v| v.conj()).collect())
    }

    /// Entrywise scaling by `lambda`.
    pub fn scale(&self, lambda: Complex64) -> Self {
        Self(self.0.iter().map(|v| v * lambda).collect())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// The entries with position `index` (0-based) removed. May be empty.
    pub fn suppressed(&self, index: usize) -> Result<Vec<Complex64>> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        let mut rest = self.0.clone();
        rest.remove(index);
        Ok(rest)
    }
}

impl TryFrom<Vec<Complex64>> for ComplexTuple {
    type Error = Error;

    fn try_from(values: Vec<Complex64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ComplexTuple> for Vec<Complex64> {
    fn from(t: ComplexTuple) -> Self {
        t.0
    }
}

impl std::ops::Index<usize> for ComplexTuple {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// `s_0, ..., s_N` of some tuple of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPolyVector(Vec<Complex64>);

impl SymmetricPolyVector {
    /// `s_m`; zero for `m` beyond the tuple length.
    pub fn get(&self, m: usize) -> Complex64 {
        self.0.get(m).copied().unwrap_or_default()
    }

    /// Number of variables `N` (the vector holds `N + 1` entries).
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// Evaluates `prod_j (x + c_j) = sum_k s_k x^{N-k}` by Horner's rule.
    pub fn eval_product(&self, x: Complex64) -> Complex64 {
        self.0
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &s| acc * x + s)
    }
}

fn expand(values: &[Complex64]) -> SymmetricPolyVector {
    let mut s = Vec::with_capacity(values.len() + 1);
    s.push(Complex64::new(1.0, 0.0));
    for &c in values {
        s.push(Complex64::new(0.0, 0.0));
        for m in (1..s.len()).rev() {
            let prev = s[m - 1];
            s[m] += c * prev;
        }
    }
    SymmetricPolyVector(s)
}

/// All elementary symmetric polynomials `s_0(c), ..., s_N(c)`.
pub fn elem_sym_all(c: &ComplexTuple) -> SymmetricPolyVector {
    expand(c.values())
}

/// Symmetric polynomials of `c` with entry `index` (0-based) removed.
///
/// Recomputed from the reduced tuple; deflating `s(c)` by the removed entry
/// would divide by it.
pub fn elem_sym_suppressed(c: &ComplexTuple, index: usize) -> Result<SymmetricPolyVector> {
    Ok(expand(&c.suppressed(index)?))
}

/// True iff every `s_m(c)`, `1 <= m <= N`, is real to relative tolerance `tol`.
///
/// A tuple is invariant under conjugation exactly when this holds.
pub fn all_sm_real(c: &ComplexTuple, tol: f64) -> bool {
    let s = elem_sym_all(c);
    s.as_slice()[1..]
        .iter()
        .all(|v| v.im.abs() <= tol * v.norm().max(1.0))
}
