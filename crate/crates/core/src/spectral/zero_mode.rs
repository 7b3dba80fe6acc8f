use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::secular::RobinTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroMode {
    pub present: bool,
    pub multiplicity: usize,
}

/// Whether `lambda = 0` is an eigenvalue, and its multiplicity.
///
/// At `lambda = 0` each edge carries `u_i = A_i + B_i x` with `B_i = h_i A_i`.
/// Continuity makes `(1 + h_i) A_i` a common value `c`, and Kirchhoff asks
/// `sum_i h_i A_i = 0`. With no `h_i = -1` this leaves one mode iff
/// `sum_i h_i / (1 + h_i) = 0`. With `k` entries equal to `-1`, `c = 0`,
/// only those `k` amplitudes are free, and they must sum to zero:
/// `k - 1` modes.
pub fn zero_eigenvalue_test(h: &RobinTuple) -> ZeroMode {
    zero_eigenvalue_test_with_tol(h, 1e-10)
}

pub fn zero_eigenvalue_test_with_tol(h: &RobinTuple, tol: f64) -> ZeroMode {
    let minus_one = h
        .values()
        .iter()
        .filter(|&&v| (v + 1.0).norm() <= tol)
        .count();
    if minus_one > 0 {
        return ZeroMode {
            present: minus_one >= 2,
            multiplicity: minus_one - 1,
        };
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 1.0;
    for &v in h.values() {
        let term = v / (v + 1.0);
        scale = scale.max(term.norm());
        sum += term;
    }
    let present = sum.norm() <= tol * scale;
    ZeroMode {
        present,
        multiplicity: usize::from(present),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let zero = zero_eigenvalue_test(&RobinTuple::zeros(3).unwrap());
        assert_eq!(
            zero,
            ZeroMode {
                present: true,
                multiplicity: 1
            }
        );

        let balanced = RobinTuple::from_reals(&[1.0, -1.0 / 3.0]).unwrap();
        assert!(zero_eigenvalue_test(&balanced).present);

        let unbalanced = RobinTuple::from_reals(&[1.0, 1.0]).unwrap();
        assert_eq!(
            zero_eigenvalue_test(&unbalanced),
            ZeroMode {
                present: false,
                multiplicity: 0
            }
        );
    }

    #[test]
    fn minus_one_entries() {
        let one = RobinTuple::from_reals(&[-1.0, 2.0, 0.5]).unwrap();
        assert!(!zero_eigenvalue_test(&one).present);
        let three = RobinTuple::from_reals(&[-1.0, -1.0, 4.0, -1.0]).unwrap();
        assert_eq!(
            zero_eigenvalue_test(&three),
            ZeroMode {
                present: true,
                multiplicity: 2
            }
        );
    }
}
