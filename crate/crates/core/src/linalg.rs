//! Small dense complex linear algebra: determinants and null spaces.

use num_complex::Complex64;

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub(crate) struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub(crate) fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.n
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.n {
            self.data.swap(a * self.n + c, b * self.n + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.n {
            self.data.swap(r * self.n + a, r * self.n + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut m: Matrix) -> Complex64 {
    let n = m.size();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| m[(a, k)].norm().total_cmp(&m[(b, k)].norm()))
            .unwrap_or(k);
        if m[(p, k)].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            m.swap_rows(p, k);
            det = -det;
        }
        let pivot = m[(k, k)];
        det *= pivot;
        for r in k + 1..n {
            let f = m[(r, k)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for c in k + 1..n {
                let v = m[(k, c)];
                m[(r, c)] -= f * v;
            }
        }
    }
    det
}

/// Outcome of a fully pivoted elimination.
#[derive(Debug, Clone)]
pub(crate) struct NullSpace {
    /// Basis vectors of the numerical null space.
    pub basis: Vec<Vec<Complex64>>,
    /// Smallest pivot magnitude met, relative to the matrix scale.
    pub smallest_pivot: f64,
}

/// Numerical null space by elimination with full pivoting.
///
/// Pivots below `rel_tol * scale` are treated as zero.
pub(crate) fn null_space(mut m: Matrix, scale: f64, rel_tol: f64) -> NullSpace {
    let n = m.size();
    let scale = scale.max(f64::MIN_POSITIVE);
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = n;
    let mut smallest_pivot = f64::INFINITY;

    for k in 0..n {
        let mut best = (k, k, -1.0);
        for r in k..n {
            for c in k..n {
                let a = m[(r, c)].norm();
                if a > best.2 {
                    best = (r, c, a);
                }
            }
        }
        let (pr, pc, mag) = best;
        smallest_pivot = smallest_pivot.min(mag / scale);
        if mag <= rel_tol * scale {
            rank = k;
            break;
        }
        m.swap_rows(k, pr);
        m.swap_cols(k, pc);
        col_perm.swap(k, pc);
        let pivot = m[(k, k)];
        for r in k + 1..n {
            let f = m[(r, k)] / pivot;
            for c in k..n {
                let v = m[(k, c)];
                m[(r, c)] -= f * v;
            }
        }
    }

    // Back-substitute the upper-trapezoidal block once per free column.
    let mut basis = Vec::new();
    for free in rank..n {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[free] = Complex64::new(1.0, 0.0);
        for r in (0..rank).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in r + 1..n {
                acc += m[(r, c)] * y[c];
            }
            y[r] = -acc / m[(r, r)];
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &orig) in col_perm.iter().enumerate() {
            x[orig] = y[k];
        }
        basis.push(x);
    }
    NullSpace {
        basis,
        smallest_pivot,
    }
}
