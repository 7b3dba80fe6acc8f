//! Conjugation pairings of Robin tuples and reflection symmetry of spectra.
//!
//! A tuple `h` is invariant under conjugation when some involution `sigma`
//! of the edges satisfies `h_{sigma(i)} = conj(h_i)`. Exactly then the
//! operator commutes with the edge permutation combined with complex
//! conjugation, and its spectrum is closed under `lambda -> conj(lambda)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::secular::RobinTuple;
use crate::spectral::{spectrum_with, SearchRegion, SolverOptions, SpectralPoint};
use crate::symmetric_poly::{all_sm_real, DEFAULT_REALITY_TOL};

/// Default relative tolerance for matching `h_j` with `conj(h_i)`.
pub const DEFAULT_PAIR_TOL: f64 = 1e-9;
/// Default relative tolerance for matching eigenvalues with their conjugates.
pub const DEFAULT_SPECTRUM_TOL: f64 = 1e-8;
/// Fewer non-zero roots than this leave the verdict inconclusive.
pub const MIN_ROOTS_FOR_VERDICT: usize = 10;

/// An involution of the edge indices `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingPermutation {
    map: Vec<usize>,
}

impl PairingPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Builds the involution from disjoint index pairs; other indices are fixed.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Option<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        for &(i, j) in pairs {
            if i >= n || j >= n || i == j || map[i] != i || map[j] != j {
                return None;
            }
            map[i] = j;
            map[j] = i;
        }
        Some(Self { map })
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// Pairs `(i, j)` with `i < j`, in increasing `i`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i, j))
            .collect()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i == j)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_involution(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(i, &j)| j < self.map.len() && self.map[j] == i)
    }

    /// `(P T h)_i = conj(h_{sigma(i)})`.
    pub fn apply_with_conjugation(&self, h: &RobinTuple) -> Result<RobinTuple> {
        RobinTuple::new(self.map.iter().map(|&j| h.values()[j].conj()).collect())
    }
}

fn near(a: Complex64, b: Complex64, tol: f64, scale: f64) -> bool {
    (a - b).norm() <= tol * scale.max(1.0)
}

/// Greedy matching of every entry with a conjugate partner.
///
/// Entries with `|Im h_i| <= tol max(1, |h_i|)` are fixed points; every other
/// entry is paired with the closest unmatched entry within `tol` of its
/// conjugate. Returns `None` when some entry is left without a partner.
pub fn conjugation_pairing(h: &RobinTuple, tol: f64) -> Option<PairingPermutation> {
    let hv = h.values();
    let n = hv.len();
    let mut map: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if hv[i].im.abs() <= tol * hv[i].norm().max(1.0) {
            map[i] = Some(i);
        }
    }
    for i in 0..n {
        if map[i].is_some() {
            continue;
        }
        let target = hv[i].conj();
        let partner = (0..n)
            .filter(|&j| j != i && map[j].is_none() && near(hv[j], target, tol, hv[i].norm()))
            .min_by(|&a, &b| (hv[a] - target).norm().total_cmp(&(hv[b] - target).norm()))?;
        map[i] = Some(partner);
        map[partner] = Some(i);
    }
    Some(PairingPermutation {
        map: map.into_iter().map(|m| m.unwrap_or_default()).collect(),
    })
}

/// Whether the eigenvalues are closed under conjugation with matching
/// multiplicities; the second component lists every point without a partner.
///
/// `lambda_j` partners `lambda_i` when `|lambda_j - conj(lambda_i)| <= tol max(1, |lambda_i|)`.
pub fn spectrum_reflection_check(points: &[SpectralPoint], tol: f64) -> (bool, Vec<SpectralPoint>) {
    let mut used = vec![false; points.len()];
    let mut unpaired = Vec::new();
    for i in 0..points.len() {
        if used[i] {
            continue;
        }
        let p = &points[i];
        let target = p.lambda.conj();
        if near(p.lambda, target, tol, p.lambda.norm()) {
            used[i] = true;
            continue;
        }
        let partner = (0..points.len())
            .filter(|&j| {
                j != i
                    && !used[j]
                    && points[j].multiplicity == p.multiplicity
                    && near(points[j].lambda, target, tol, p.lambda.norm())
            })
            .min_by(|&a, &b| {
                (points[a].lambda - target)
                    .norm()
                    .total_cmp(&(points[b].lambda - target).norm())
            });
        used[i] = true;
        match partner {
            Some(j) => used[j] = true,
            None => unpaired.push(*p),
        }
    }
    (unpaired.is_empty(), unpaired)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    PtSymmetric,
    NotPtSymmetric,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// A conjugation pairing of `h` exists.
    pub h_invariant: bool,
    pub pairing: Option<PairingPermutation>,
    /// Every elementary symmetric polynomial of `h` is real.
    pub symmetric_polys_real: bool,
    pub spectrum_symmetric: bool,
    pub unpaired_roots: Vec<SpectralPoint>,
    /// Non-zero roots found, with multiplicity.
    pub root_count: usize,
    pub search_complete: bool,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SymmetryOptions {
    pub solver: SolverOptions,
    pub pair_tol: f64,
    pub spectrum_tol: f64,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            pair_tol: DEFAULT_PAIR_TOL,
            spectrum_tol: DEFAULT_SPECTRUM_TOL,
        }
    }
}

/// Decides symmetry of the spectrum from `h` and checks the decision
/// against the computed spectrum in `region`.
///
/// The verdict follows the pairing only when the pairing, the reality of
/// the symmetric polynomials and the computed spectrum all agree, and the
/// search is complete with at least [`MIN_ROOTS_FOR_VERDICT`] roots.
/// Anything else is [`Verdict::Inconclusive`] with the reason in
/// `diagnostics`.
pub fn pt_verdict(h: &RobinTuple, region: &SearchRegion, tol: f64) -> Result<SymmetryReport> {
    let opts = SymmetryOptions {
        solver: SolverOptions::with_tol(tol),
        ..Default::default()
    };
    pt_verdict_with(h, region, &opts)
}

pub fn pt_verdict_with(
    h: &RobinTuple,
    region: &SearchRegion,
    opts: &SymmetryOptions,
) -> Result<SymmetryReport> {
    let pairing = conjugation_pairing(h, opts.pair_tol);
    let h_invariant = pairing.is_some();
    let symmetric_polys_real = all_sm_real(h.tuple(), DEFAULT_REALITY_TOL);

    let search = spectrum_with(h, region, &opts.solver)?;
    let root_count = search.multiplicity_sum();
    let (spectrum_symmetric, unpaired_roots) =
        spectrum_reflection_check(&search.points, opts.spectrum_tol);

    let mut diagnostics = Vec::new();
    if h_invariant != symmetric_polys_real {
        diagnostics.push(format!(
            "pairing {} but symmetric polynomials {}",
            if h_invariant { "found" } else { "absent" },
            if symmetric_polys_real {
                "all real"
            } else {
                "not all real"
            }
        ));
    }
    for f in &search.failures {
        diagnostics.push(format!("unresolved region {}: {}", f.region, f.reason));
    }
    if root_count < MIN_ROOTS_FOR_VERDICT {
        diagnostics.push(format!(
            "{root_count} roots in the window, at least {MIN_ROOTS_FOR_VERDICT} needed"
        ));
    }
    if spectrum_symmetric != h_invariant {
        diagnostics.push(format!(
            "spectrum {} but h {}",
            if spectrum_symmetric {
                "symmetric"
            } else {
                "not symmetric"
            },
            if h_invariant {
                "invariant"
            } else {
                "not invariant"
            }
        ));
    }

    let verdict = if !diagnostics.is_empty() {
        Verdict::Inconclusive
    } else if h_invariant {
        Verdict::PtSymmetric
    } else {
        Verdict::NotPtSymmetric
    };
    Ok(SymmetryReport {
        h_invariant,
        pairing,
        symmetric_polys_real,
        spectrum_symmetric,
        unpaired_roots,
        root_count,
        search_complete: search.is_complete(),
        verdict,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(lambda: Complex64, multiplicity: usize) -> SpectralPoint {
        SpectralPoint {
            z: lambda.sqrt(),
            lambda,
            multiplicity,
            residual: 0.0,
            enclosure_radius: 0.0,
        }
    }

    #[test]
    fn pairing_of_invariant_tuple() {
        let h = RobinTuple::new(vec![
            c(0., -1.),
            c(1., 0.),
            c(0., 3.),
            c(0., -3.),
            c(0., 1.),
        ])
        .unwrap();
        let p = conjugation_pairing(&h, DEFAULT_PAIR_TOL).unwrap();
        assert_eq!(p.pairs(), vec![(0, 4), (2, 3)]);
        assert_eq!(p.fixed_points(), vec![1]);
        assert!(p.is_involution());
        let back = p.apply_with_conjugation(&h).unwrap();
        for (a, b) in back.values().iter().zip(h.values()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn no_pairing_for_unbalanced_tuple() {
        let h = RobinTuple::new(vec![c(1., 0.), c(0., 1.), c(0., 1.), c(0., -1.)]).unwrap();
        assert!(conjugation_pairing(&h, DEFAULT_PAIR_TOL).is_none());
    }

    #[test]
    fn real_tuple_has_identity_pairing() {
        let h = RobinTuple::from_reals(&[0.3, -2.0, 5.0]).unwrap();
        assert_eq!(
            conjugation_pairing(&h, DEFAULT_PAIR_TOL),
            Some(PairingPermutation::identity(3))
        );
    }

    #[test]
    fn permutation_from_pairs() {
        assert!(PairingPermutation::from_pairs(3, &[(0, 1), (1, 2)]).is_none());
        assert!(PairingPermutation::from_pairs(3, &[(0, 3)]).is_none());
        let p = PairingPermutation::from_pairs(4, &[(3, 1)]).unwrap();
        assert_eq!(p.as_slice(), &[0, 3, 2, 1]);
        assert!(p.is_involution());
        assert!(!PairingPermutation { map: vec![1, 2, 0] }.is_involution());
    }

    #[test]
    fn reflection_of_small_spectra() {
        let pts = [
            point(c(4., 1.), 1),
            point(c(4., -1.), 1),
            point(c(9., 0.), 1),
        ];
        assert_eq!(spectrum_reflection_check(&pts, 1e-8), (true, vec![]));

        let (ok, unpaired) =
            spectrum_reflection_check(&[point(c(4., 1.), 1), point(c(9., 0.), 1)], 1e-8);
        assert!(!ok);
        assert_eq!(unpaired.len(), 1);
        assert_eq!(unpaired[0].lambda, c(4., 1.));

        // a conjugate partner of different multiplicity does not count
        let (ok, unpaired) =
            spectrum_reflection_check(&[point(c(4., 1.), 2), point(c(4., -1.), 1)], 1e-8);
        assert!(!ok);
        assert_eq!(unpaired.len(), 2);
    }

    #[test]
    fn verdicts() {
        let region = SearchRegion::window(0.1, 25.0, 1.0).unwrap();
        let sym = RobinTuple::new(vec![c(0., 1.), c(0., -1.), c(0.5, 0.)]).unwrap();
        let r = pt_verdict(&sym, &region, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::PtSymmetric, "{:?}", r.diagnostics);
        assert_eq!(r.pairing.unwrap().pairs(), vec![(0, 1)]);

        let asym = RobinTuple::new(vec![c(1., 0.), c(0., 1.), c(0., 1.), c(0., -1.)]).unwrap();
        let r = pt_verdict(&asym, &region, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::NotPtSymmetric, "{:?}", r.diagnostics);
        assert!(!r.unpaired_roots.is_empty());

        let small = SearchRegion::window(0.1, 5.0, 1.0).unwrap();
        let r = pt_verdict(&RobinTuple::zeros(2).unwrap(), &small, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
