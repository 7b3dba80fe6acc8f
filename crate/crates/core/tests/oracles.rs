use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robinstar::secular::RobinTuple;
use robinstar::spectral::zero_eigenvalue_test;
use robinstar::symmetric_poly::{elem_sym_all, ComplexTuple};
use robinstar::verify::{random_in_disk, random_tuple};

fn subset_sums(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    let mut s = vec![Complex64::new(0.0, 0.0); n + 1];
    for mask in 0u32..(1 << n) {
        let p: Complex64 = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| c[i])
            .product();
        s[mask.count_ones() as usize] += p;
    }
    s
}

#[test]
fn convolution_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let n = rng.random_range(1..=12);
        let c = random_tuple(&mut rng, n, 1.5);
        let fast = elem_sym_all(&c);
        let slow = subset_sums(c.values());
        for m in 0..=n {
            let err = (fast.get(m) - slow[m]).norm();
            assert!(
                err <= 1e-12 * slow[m].norm().max(1.0),
                "N = {n}, m = {m}: {err:e}"
            );
        }
        assert_eq!(fast.get(n + 1), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn stated_tuple_second_polynomial() {
    let i = Complex64::new(0.0, 1.0);
    let c = ComplexTuple::new(vec![-i, 1.0.into(), 3.0 * i, -3.0 * i, i]).unwrap();
    let s2 = subset_sums(c.values())[2];
    assert!((s2 - Complex64::new(10.0, 0.0)).norm() < 1e-13);
    assert!((elem_sym_all(&c).get(2) - s2).norm() < 1e-13);
}

/// Null-space dimension of the `lambda = 0` conditions, by SVD.
///
/// On each edge `u_i = A_i + h_i A_i x`; rows impose equal values
/// `(1 + h_i) A_i` at the centre, and the last row the Kirchhoff sum
/// `sum_i h_i A_i`.
fn zero_mode_rank_deficiency(h: &[Complex64]) -> usize {
    let n = h.len();
    let one = Complex64::new(1.0, 0.0);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n - 1 {
        m[(i, i)] = one + h[i];
        m[(i, i + 1)] = -(one + h[i + 1]);
    }
    for (j, &hj) in h.iter().enumerate() {
        m[(n - 1, j)] = hj;
    }
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max).max(1.0);
    sv.iter().filter(|&&s| s <= 1e-10 * top).count()
}

#[test]
fn zero_mode_agrees_with_svd_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let minus_one = Complex64::new(-1.0, 0.0);
    for trial in 0..400 {
        let n = rng.random_range(1..=7);
        let mut h: Vec<Complex64> = (0..n).map(|_| random_in_disk(&mut rng, 3.0)).collect();
        match trial % 4 {
            // balanced: sum h/(1+h) = 0 by solving for the last entry
            0 if n >= 2 => {
                let s: Complex64 = h[..n - 1].iter().map(|&v| v / (v + 1.0)).sum();
                h[n - 1] = -s / (s + 1.0);
            }
            // several entries pinned at -1
            1 => {
                let k = rng.random_range(1..=n);
                for v in h.iter_mut().take(k) {
                    *v = minus_one;
                }
            }
            2 => h = vec![Complex64::new(0.0, 0.0); n],
            _ => {}
        }
        let expected = zero_mode_rank_deficiency(&h);
        let got = zero_eigenvalue_test(&RobinTuple::new(h.clone()).unwrap());
        assert_eq!(got.multiplicity, expected, "h = {h:?}");
        assert_eq!(got.present, expected > 0);
    }
}
