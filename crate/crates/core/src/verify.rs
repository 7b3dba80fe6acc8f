//! Seeded randomized property suites over the symmetric polynomials and the
//! secular function.
//!
//! Each suite draws its own stream from `seed`, so a suite's outcome does
//! not depend on which other suites run.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::secular::{d_compact, d_det, d_sum, d_with_derivative, RobinTuple};
use crate::symmetric_poly::{
    all_sm_real, elem_sym_all, elem_sym_suppressed, ComplexTuple, DEFAULT_REALITY_TOL,
};
use crate::symmetry::{conjugation_pairing, DEFAULT_PAIR_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub samples: usize,
    pub passed: usize,
    /// Largest normalized error met (0 for purely logical suites).
    pub worst_error: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.samples
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    passed: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            samples: 0,
            passed: 0,
            worst: 0.0,
        }
    }

    /// Records one sample whose errors are all in `errs`.
    fn record(&mut self, errs: impl IntoIterator<Item = f64>) {
        let worst = errs.into_iter().fold(
            0.0,
            |a: f64, e| if e.is_nan() { f64::INFINITY } else { a.max(e) },
        );
        self.samples += 1;
        if worst <= self.tolerance {
            self.passed += 1;
        }
        self.worst = self.worst.max(worst);
    }

    fn check(&mut self, ok: bool) {
        self.samples += 1;
        if ok {
            self.passed += 1;
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            samples: self.samples,
            passed: self.passed,
            worst_error: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn rng_for(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Uniform point in the disk of radius `r`.
pub fn random_in_disk<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    Complex64::from_polar(
        r * rng.random::<f64>().sqrt(),
        2.0 * PI * rng.random::<f64>(),
    )
}

pub fn random_tuple<R: Rng>(rng: &mut R, n: usize, r: f64) -> ComplexTuple {
    ComplexTuple::new((0..n).map(|_| random_in_disk(rng, r)).collect()).expect("finite entries")
}

/// `s_m` of `|c_1|, ..., |c_N|`, an upper bound for every term of `s_m(c)`.
fn abs_bounds(c: &ComplexTuple) -> Vec<f64> {
    let abs =
        ComplexTuple::from_reals(&c.iter().map(|v| v.norm()).collect::<Vec<_>>()).expect("finite");
    elem_sym_all(&abs).as_slice().iter().map(|v| v.re).collect()
}

fn rel(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / scale.max(f64::MIN_POSITIVE)
}

/// `c_i s_j(c^(i)) = s_{j+1}(c) - s_{j+1}(c^(i))` for all `i`, `j`.
pub fn symmetric_recursion(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 1);
    let mut t = Tally::new("symmetric_recursion", 1e-12);
    for _ in 0..samples {
        let n = rng.random_range(1..=10);
        let c = random_tuple(&mut rng, n, 2.0);
        let s = elem_sym_all(&c);
        let bound = abs_bounds(&c);
        let mut errs = Vec::new();
        for i in 0..n {
            let si = elem_sym_suppressed(&c, i).expect("index in range");
            for j in 0..n {
                errs.push(rel(
                    c[i] * si.get(j),
                    s.get(j + 1) - si.get(j + 1),
                    bound[j + 1],
                ));
            }
        }
        t.record(errs);
    }
    t.finish()
}

/// `sum_i s_j(c^(i)) = (N - j) s_j(c)`.
pub fn symmetric_sum_rule(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 2);
    let mut t = Tally::new("symmetric_sum_rule", 1e-12);
    for _ in 0..samples {
        let n = rng.random_range(1..=10);
        let c = random_tuple(&mut rng, n, 2.0);
        let s = elem_sym_all(&c);
        let bound = abs_bounds(&c);
        let sup: Vec<_> = (0..n)
            .map(|i| elem_sym_suppressed(&c, i).expect("index in range"))
            .collect();
        let errs = (0..=n).map(|j| {
            let lhs: Complex64 = sup.iter().map(|si| si.get(j)).sum();
            rel(lhs, s.get(j) * (n - j) as f64, n as f64 * bound[j])
        });
        t.record(errs.collect::<Vec<_>>());
    }
    t.finish()
}

/// `prod_j (x + c_j) = sum_k s_k(c) x^{N-k}`.
pub fn symmetric_product(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 3);
    let mut t = Tally::new("symmetric_product", 1e-12);
    for _ in 0..samples {
        let n = rng.random_range(1..=10);
        let c = random_tuple(&mut rng, n, 2.0);
        let x = random_in_disk(&mut rng, 3.0);
        let lhs: Complex64 = c.iter().map(|&v| x + v).product();
        let s = elem_sym_all(&c);
        let rhs: Complex64 = (0..=n).map(|k| s.get(k) * x.powu((n - k) as u32)).sum();
        let scale: f64 = c.iter().map(|v| x.norm() + v.norm()).product();
        t.record([rel(lhs, rhs, scale)]);
    }
    t.finish()
}

/// `s_m(lambda c) = lambda^m s_m(c)`.
pub fn symmetric_homogeneity(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 4);
    let mut t = Tally::new("symmetric_homogeneity", 1e-12);
    for _ in 0..samples {
        let n = rng.random_range(1..=10);
        let c = random_tuple(&mut rng, n, 2.0);
        let lambda = random_in_disk(&mut rng, 3.0);
        let s = elem_sym_all(&c);
        let sl = elem_sym_all(&c.scale(lambda));
        let bound = abs_bounds(&c);
        let errs: Vec<f64> = (0..=n)
            .map(|m| {
                let lm = lambda.powu(m as u32);
                rel(sl.get(m), lm * s.get(m), lm.norm() * bound[m])
            })
            .collect();
        t.record(errs);
    }
    t.finish()
}

/// `s_m(conj c) = conj(s_m(c))`.
pub fn symmetric_conjugation(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 5);
    let mut t = Tally::new("symmetric_conjugation", 1e-12);
    for _ in 0..samples {
        let n = rng.random_range(1..=10);
        let c = random_tuple(&mut rng, n, 2.0);
        let s = elem_sym_all(&c);
        let sc = elem_sym_all(&c.conj());
        let bound = abs_bounds(&c);
        t.record(
            (0..=n)
                .map(|m| rel(sc.get(m), s.get(m).conj(), bound[m]))
                .collect::<Vec<_>>(),
        );
    }
    t.finish()
}

/// Tuples built from conjugate pairs and reals: every `s_m` is real and a
/// pairing exists.
pub fn reality_invariant_tuples(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 6);
    let mut t = Tally::new("reality_invariant_tuples", 0.0);
    for _ in 0..samples {
        let pairs = rng.random_range(0..=4);
        let reals = rng.random_range(usize::from(pairs == 0)..=3);
        let mut v = Vec::new();
        for _ in 0..pairs {
            let w = random_in_disk(&mut rng, 5.0);
            v.push(w);
            v.push(w.conj());
        }
        for _ in 0..reals {
            v.push(Complex64::new(rng.random_range(-5.0..5.0), 0.0));
        }
        shuffle(&mut rng, &mut v);
        let c = ComplexTuple::new(v).expect("finite");
        let h = RobinTuple::from(c.clone());
        t.check(
            all_sm_real(&c, DEFAULT_REALITY_TOL)
                && conjugation_pairing(&h, DEFAULT_PAIR_TOL).is_some(),
        );
    }
    t.finish()
}

/// Gaussian-integer tuples without a conjugate pairing: exact subset
/// enumeration finds a non-real `s_m`, and the floating-point test agrees.
pub fn reality_non_invariant_tuples(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 7);
    let mut t = Tally::new("reality_non_invariant_tuples", 0.0);
    let mut drawn = 0;
    while drawn < samples {
        let n = rng.random_range(1..=10);
        let v: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.random_range(-3..=3), rng.random_range(-3..=3)))
            .collect();
        if has_exact_pairing(&v) {
            continue;
        }
        drawn += 1;
        let exact_nonreal = subset_symmetric_sums(&v).iter().any(|&(_, im)| im != 0);
        let c = ComplexTuple::new(
            v.iter()
                .map(|&(a, b)| Complex64::new(a as f64, b as f64))
                .collect(),
        )
        .expect("finite");
        let h = RobinTuple::from(c.clone());
        t.check(
            exact_nonreal
                && !all_sm_real(&c, DEFAULT_REALITY_TOL)
                && conjugation_pairing(&h, DEFAULT_PAIR_TOL).is_none(),
        );
    }
    t.finish()
}

fn shuffle<R: Rng, T>(rng: &mut R, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

/// Whether the multiset of Gaussian integers is closed under conjugation.
pub fn has_exact_pairing(v: &[(i64, i64)]) -> bool {
    let mut a: Vec<(i64, i64)> = v.to_vec();
    let mut b: Vec<(i64, i64)> = v.iter().map(|&(x, y)| (x, -y)).collect();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// `s_0, ..., s_N` of a Gaussian-integer tuple by summing over all subsets, exactly.
pub fn subset_symmetric_sums(v: &[(i64, i64)]) -> Vec<(i128, i128)> {
    let n = v.len();
    assert!(n <= 20, "subset enumeration is limited to small tuples");
    let mut s = vec![(0i128, 0i128); n + 1];
    for mask in 0u32..(1 << n) {
        let mut p = (1i128, 0i128);
        for (i, &(x, y)) in v.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p = (
                    p.0 * x as i128 - p.1 * y as i128,
                    p.0 * y as i128 + p.1 * x as i128,
                );
            }
        }
        let m = mask.count_ones() as usize;
        s[m].0 += p.0;
        s[m].1 += p.1;
    }
    s
}

/// `N` in `1..=8`, `|h_i| <= 10`, `|z| <= 50`.
fn secular_sample<R: Rng>(rng: &mut R) -> (RobinTuple, Complex64) {
    let n = rng.random_range(1..=8);
    let h = RobinTuple::from(random_tuple(rng, n, 10.0));
    let mut z = random_in_disk(rng, 50.0);
    while z.norm() < 1e-3 {
        z = random_in_disk(rng, 50.0);
    }
    (h, z)
}

/// Agreement of the determinant, sum and symmetric-polynomial forms,
/// relative to the largest of the three magnitudes (floored at `1e-12`).
pub fn three_form_agreement(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 8);
    let mut t = Tally::new("three_form_agreement", 1e-10);
    for _ in 0..samples {
        let (h, z) = secular_sample(&mut rng);
        let a = d_sum(&h, z);
        let b = d_det(&h, z);
        let Ok(c) = d_compact(&h, z) else {
            t.record([f64::INFINITY]);
            continue;
        };
        let scale = a.norm().max(b.norm()).max(c.norm()).max(1e-12);
        t.record([rel(a, b, scale), rel(a, c, scale), rel(b, c, scale)]);
    }
    t.finish()
}

/// `conj(D_h(conj z)) = D_{conj h}(z)`.
pub fn conjugation_identity(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 9);
    let mut t = Tally::new("conjugation_identity", 1e-12);
    for _ in 0..samples {
        let (h, z) = secular_sample(&mut rng);
        let a = d_sum(&h, z.conj()).conj();
        let b = d_sum(&h.conj(), z);
        t.record([rel(a, b, a.norm().max(b.norm()).max(1e-12))]);
    }
    t.finish()
}

/// `D_h(-z) = (-1)^{N-1} D_h(z)`.
pub fn parity(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 10);
    let mut t = Tally::new("parity", 1e-12);
    for _ in 0..samples {
        let (h, z) = secular_sample(&mut rng);
        let sign = if h.edges() % 2 == 1 { 1.0 } else { -1.0 };
        let a = d_sum(&h, -z);
        let b = d_sum(&h, z) * sign;
        t.record([rel(a, b, a.norm().max(b.norm()).max(1e-12))]);
    }
    t.finish()
}

/// `D_h(n pi) = (n pi)^{N-1} (-1)^{nN} s_1(h)` for `1 <= n <= 50`.
///
/// `n pi` is not representable, so `D_h` is evaluated at the nearest double
/// `x` and corrected by `D_h'(x) (n pi - x)`.
pub fn multiples_of_pi(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = rng_for(seed, 11);
    let mut t = Tally::new("multiples_of_pi", 1e-12);
    for _ in 0..samples {
        let n = rng.random_range(1..=8usize);
        let h = RobinTuple::from(random_tuple(&mut rng, n, 10.0));
        let k = rng.random_range(1..=50u32);
        t.record([multiple_of_pi_error(&h, k)]);
    }
    t.finish()
}

/// Relative error of `D_h(k pi)` against its closed form.
pub fn multiple_of_pi_error(h: &RobinTuple, k: u32) -> f64 {
    let n = h.edges();
    let exact = crate::dd::DoubleDouble::PI * k as f64;
    let x = exact.hi();
    let (d, dd) = d_with_derivative(h, Complex64::new(x, 0.0));
    let value = d + dd * (exact - crate::dd::DoubleDouble::from_f64(x)).to_f64();
    let s1: Complex64 = h.values().iter().sum();
    let sign = if (k as usize * n).is_multiple_of(2) { 1.0 } else { -1.0 };
    let expect = s1 * (k as f64 * PI).powi(n as i32 - 1) * sign;
    // the closed form vanishes with s_1; measure against the size of its terms
    let scale =
        (k as f64 * PI).powi(n as i32 - 1) * h.values().iter().map(|v| v.norm()).sum::<f64>();
    rel(value, expect, expect.norm().max(1e-12 * scale.max(1.0)))
}

/// Every suite with `samples` draws each.
pub fn run_all(seed: u64, samples: usize) -> Vec<SuiteResult> {
    vec![
        symmetric_recursion(seed, samples),
        symmetric_sum_rule(seed, samples),
        symmetric_product(seed, samples),
        symmetric_homogeneity(seed, samples),
        symmetric_conjugation(seed, samples),
        reality_invariant_tuples(seed, samples),
        reality_non_invariant_tuples(seed, samples),
        three_form_agreement(seed, samples),
        conjugation_identity(seed, samples),
        parity(seed, samples),
        multiples_of_pi(seed, samples),
    ]
}
