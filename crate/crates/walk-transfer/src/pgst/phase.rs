//! Phase patterns: for an automorphism P of order dividing m that commutes
//! with the Hamiltonian, split each eigenspace into rotation components
//! F_{j,e} = E_j Q_e with Q_e = (1/m) sum_k zeta^{-ek} P^k, and record the
//! exponent e_j with F_{j,e} u = zeta^{e_j} F_{j,e} v on the joint support.
//!
//! Keying classes by the pair (eigenvalue, rotation exponent) matters:
//! a merged eigenvalue can meet several rotation components with different
//! exponents, and collapsing them to one class can cancel a relation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pgst::automorphism::Automorphism;
use crate::spectral::SpectralDecomposition;
use crate::states::PureState;

pub const DEFAULT_PATTERN_TOL: f64 = 1e-9;

/// One support class: an eigenvalue together with the rotation component it
/// was found in, and the phase exponent relating u to v there.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseClass {
    /// Eigenvalue of the class.
    pub eigenvalue: f64,
    /// Index of the eigenvalue in the spectral decomposition.
    pub eigen_index: usize,
    /// Rotation component index (eigenvalue exponent of P in the component).
    pub rotation: u32,
    /// Exponent e with F u = zeta_m^e F v on this class.
    pub exponent: u32,
}

/// The full pattern: root order m and one class per joint support component.
#[derive(Debug, Clone, Serialize)]
pub struct PhasePattern {
    pub modulus: u32,
    pub classes: Vec<PhaseClass>,
}

fn apply_perm_complex(p: &Automorphism, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (src, &dst) in p.image().iter().enumerate() {
        out[dst] = v[src];
    }
    out
}

/// Q_e u as a complex vector.
fn rotation_component(p: &Automorphism, u: &PureState, m: u32, e: u32) -> Vec<Complex64> {
    let n = u.n();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    let mut cur: Vec<Complex64> =
        u.vector().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for k in 0..m {
        let phase = Complex64::from_polar(
            1.0 / m as f64,
            -2.0 * std::f64::consts::PI * (e as f64) * (k as f64) / m as f64,
        );
        for i in 0..n {
            acc[i] += phase * cur[i];
        }
        cur = apply_perm_complex(p, &cur);
    }
    acc
}

fn project(e: &nalgebra::DMatrix<f64>, v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += e[(i, j)] * v[j];
        }
        out[i] = acc;
    }
    out
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Derive the phase pattern of (u, v) under P with root order m.
///
/// Preconditions checked: P^m = I, P commutes with every spectral projector,
/// and u, v occupy the same joint components. A component where no exponent
/// fits within tolerance is a pattern-undefined error.
pub fn derive_phase_pattern(
    dec: &SpectralDecomposition,
    p: &Automorphism,
    u: &PureState,
    v: &PureState,
    m: u32,
    tol: Option<f64>,
) -> Result<PhasePattern> {
    let tol = tol.unwrap_or(DEFAULT_PATTERN_TOL);
    let n = dec.dim();
    if p.n() != n || u.n() != n || v.n() != n {
        return Err(Error::SizeMismatch(p.n(), n));
    }
    if m == 0 {
        return Err(Error::Domain("root order m must be positive".into()));
    }
    if m % (p.order() as u32) != 0 {
        return Err(Error::Domain(format!(
            "automorphism order {} does not divide root order {m}",
            p.order()
        )));
    }
    // P must commute with the Hamiltonian, hence with each projector:
    // E[p(i), p(j)] == E[i, j] within tolerance.
    for e_mat in dec.projectors() {
        for i in 0..n {
            for j in 0..n {
                let d = (e_mat[(p.apply(i), p.apply(j))] - e_mat[(i, j)]).abs();
                if d > tol {
                    return Err(Error::Domain(
                        "automorphism does not commute with the Hamiltonian".into(),
                    ));
                }
            }
        }
    }
    let mut classes = Vec::new();
    for e in 0..m {
        let qu = rotation_component(p, u, m, e);
        let qv = rotation_component(p, v, m, e);
        for (j, e_mat) in dec.projectors().iter().enumerate() {
            let fu = project(e_mat, &qu);
            let fv = project(e_mat, &qv);
            let nu = norm(&fu);
            let nv = norm(&fv);
            if nu <= tol && nv <= tol {
                continue;
            }
            if nu <= tol || nv <= tol {
                return Err(Error::PatternUndefined(j));
            }
            let mut best: Option<(u32, f64)> = None;
            for g in 0..m {
                let zeta = Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (g as f64) / m as f64,
                );
                let resid: f64 = fu
                    .iter()
                    .zip(&fv)
                    .map(|(a, b)| (a - zeta * b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if best.is_none() || resid < best.unwrap().1 {
                    best = Some((g, resid));
                }
            }
            let (g, resid) = best.unwrap();
            if resid > tol * nu.max(1.0) * 10.0 {
                return Err(Error::PatternUndefined(j));
            }
            classes.push(PhaseClass {
                eigenvalue: dec.eigenvalues()[j],
                eigen_index: j,
                rotation: e,
                exponent: g,
            });
        }
    }
    classes.sort_by(|a, b| {
        a.eigen_index.cmp(&b.eigen_index).then(a.rotation.cmp(&b.rotation))
    });
    Ok(PhasePattern { modulus: m, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{HamiltonianKind, WeightedGraph};

    fn adjacency_dec(g: &WeightedGraph) -> SpectralDecomposition {
        SpectralDecomposition::decompose(&g.hamiltonian(HamiltonianKind::Adjacency).unwrap(), None)
            .unwrap()
    }

    fn rotation(n: usize, by: usize) -> Vec<usize> {
        (0..n).map(|j| (j + by) % n).collect()
    }

    #[test]
    fn identity_pattern_is_all_zero() {
        let g = WeightedGraph::cycle(5).unwrap();
        let dec = adjacency_dec(&g);
        let u = PureState::plus(5, 0, 2).unwrap();
        let p = Automorphism::identity(5);
        let pat = derive_phase_pattern(&dec, &p, &u, &u, 3, None).unwrap();
        assert!(!pat.classes.is_empty());
        assert!(pat.classes.iter().all(|c| c.exponent == 0));
    }

    #[test]
    fn c12_half_turn_pattern_alternates() {
        // Half-turn j -> j+6 on C12 with u = plus(0,1), v = plus(6,7):
        // the exponent on the class of lambda_l is l mod 2, so sorting the
        // distinct eigenvalues descending gives alternating exponents.
        let g = WeightedGraph::cycle(12).unwrap();
        let dec = adjacency_dec(&g);
        let p = Automorphism::new(&g, rotation(12, 6)).unwrap();
        let u = PureState::plus(12, 0, 1).unwrap();
        let v = PureState::plus(12, 6, 7).unwrap();
        let pat = derive_phase_pattern(&dec, &p, &u, &v, 2, None).unwrap();
        // Support misses lambda_6 = -2 (1 + (-1)^(l*b) vanishes at l = 6):
        // classes are lambda_0..lambda_5 in ascending eigenvalue order
        // lambda_5 < lambda_4 < ... < lambda_0, exponents l mod 2.
        assert_eq!(pat.classes.len(), 6);
        let mut got: Vec<(f64, u32)> =
            pat.classes.iter().map(|c| (c.eigenvalue, c.exponent)).collect();
        got.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for (l, (lam, e)) in got.iter().enumerate() {
            let expect = 2.0 * (2.0 * std::f64::consts::PI * l as f64 / 12.0).cos();
            assert!((lam - expect).abs() < 1e-9, "lambda_{l}");
            assert_eq!(*e, (l as u32) % 2, "exponent at lambda_{l}");
        }
    }

    #[test]
    fn complement_c12_quarter_turn_splits_merged_classes() {
        // Quarter-turn j -> j+3 on complement(C12). For u = plus(0,1) and
        // v = plus(3,4) every Fourier index is in the support; the merged
        // eigenvalue mu_5 = mu_7 meets rotation components with different
        // exponents (5 mod 4 and 7 mod 4), which must stay separate classes.
        let g = WeightedGraph::cycle(12).unwrap().complement().unwrap();
        let dec = adjacency_dec(&g);
        let p = Automorphism::new(&g, rotation(12, 3)).unwrap();
        let u = PureState::plus(12, 0, 1).unwrap();
        let v = PureState::plus(12, 3, 4).unwrap();
        let pat = derive_phase_pattern(&dec, &p, &u, &v, 4, None).unwrap();
        let mu5 = -1.0 + 3f64.sqrt();
        let split: Vec<u32> = pat
            .classes
            .iter()
            .filter(|c| (c.eigenvalue - mu5).abs() < 1e-9)
            .map(|c| c.exponent)
            .collect();
        assert_eq!(split.len(), 2, "merged eigenvalue must split into two classes");
        let mut sorted = split.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 3]);
    }

    #[test]
    fn mismatched_supports_are_rejected() {
        let g = WeightedGraph::cycle(12).unwrap();
        let dec = adjacency_dec(&g);
        let p = Automorphism::new(&g, rotation(12, 6)).unwrap();
        // u misses lambda_6, the vertex state does not: undefined pattern.
        let u = PureState::plus(12, 0, 1).unwrap();
        let v = PureState::vertex(12, 6).unwrap();
        assert!(matches!(
            derive_phase_pattern(&dec, &p, &u, &v, 2, None),
            Err(Error::PatternUndefined(_))
        ));
    }

    #[test]
    fn non_commuting_permutation_is_rejected() {
        // Swapping 0 and 1 is an automorphism of K4 but not of P4, so it
        // fails the commutation check against the P4 decomposition.
        let g = WeightedGraph::path(4).unwrap();
        let dec = adjacency_dec(&g);
        let mut image: Vec<usize> = (0..4).collect();
        image.swap(0, 1);
        let bad = Automorphism::new(&WeightedGraph::complete(4), image).unwrap();
        let u = PureState::vertex(4, 0).unwrap();
        assert!(derive_phase_pattern(&dec, &bad, &u, &u, 2, None).is_err());
    }
}
