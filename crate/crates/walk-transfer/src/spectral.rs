//! Eigenprojection decomposition of symmetric Hamiltonians, the transition
//! operator U(t) = exp(itM), eigenvalue supports, fixed/periodic state tests,
//! and the exact spectra of cycles.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::PureState;
use crate::transfer::{TransferWitness, WitnessKind};

pub const DEFAULT_GROUP_TOL: f64 = 1e-9;
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-9;

/// Distinct eigenvalues of a symmetric matrix together with their
/// orthogonal eigenprojections.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<DMatrix<f64>>,
    /// Spectral radius, used to normalize tolerances.
    scale: f64,
    /// Set when two eigenvalue clusters sit closer than 10x the grouping
    /// tolerance; the grouping may then have merged or split a true
    /// multiplicity.
    ill_separated: bool,
    group_tol: f64,
}

impl SpectralDecomposition {
    /// Decompose a symmetric matrix, clustering raw eigenvalues whose
    /// spread is below `group_tol` (default 1e-9 * max(1, spectral radius)).
    pub fn decompose(m: &DMatrix<f64>, group_tol: Option<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::SizeMismatch(m.nrows(), m.ncols()));
        }
        let sym_defect = (m - m.transpose()).abs().max();
        if sym_defect > 1e-12 * m.abs().max().max(1.0) {
            return Err(Error::Domain(format!(
                "matrix is not symmetric (max asymmetry {sym_defect:.3e})"
            )));
        }
        let eig = SymmetricEigen::new(m.clone());
        let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        let tol = match group_tol {
            Some(t) if t > 0.0 => t,
            Some(t) => return Err(Error::Domain(format!("group_tol must be positive, got {t}"))),
            None => DEFAULT_GROUP_TOL * scale.max(1.0),
        };

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let mut eigenvalues = Vec::new();
        let mut projectors = Vec::new();
        let mut group: Vec<usize> = Vec::new();
        let flush = |group: &mut Vec<usize>, eigenvalues: &mut Vec<f64>, projectors: &mut Vec<DMatrix<f64>>| {
            if group.is_empty() {
                return;
            }
            let mean = group.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / group.len() as f64;
            let mut p = DMatrix::zeros(n, n);
            for &i in group.iter() {
                let v = eig.eigenvectors.column(i);
                p += &v * v.transpose();
            }
            eigenvalues.push(mean);
            projectors.push(p);
            group.clear();
        };
        for &i in &order {
            if let Some(&first) = group.first() {
                if eig.eigenvalues[i] - eig.eigenvalues[first] > tol {
                    flush(&mut group, &mut eigenvalues, &mut projectors);
                }
            }
            group.push(i);
        }
        flush(&mut group, &mut eigenvalues, &mut projectors);

        let ill_separated = eigenvalues.windows(2).any(|w| w[1] - w[0] < 10.0 * tol);
        Ok(Self { eigenvalues, projectors, scale, ill_separated, group_tol: tol })
    }

    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn ill_separated(&self) -> bool {
        self.ill_separated
    }

    pub fn group_tol(&self) -> f64 {
        self.group_tol
    }

    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, |p| p.nrows())
    }

    /// Multiplicity of the j-th eigenvalue: the projector rank, read off as
    /// the rounded trace.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.projectors[j].trace().round() as usize
    }

    /// The transition matrix U(t) = sum_j exp(it lambda_j) E_j.
    pub fn transition(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut u = DMatrix::<Complex64>::zeros(n, n);
        for (lambda, p) in self.eigenvalues.iter().zip(&self.projectors) {
            let phase = Complex64::from_polar(1.0, t * lambda);
            u.zip_apply(p, |acc, e| *acc += phase * Complex::from(e));
        }
        u
    }

    /// U(t) applied to a real state, using precomputed projections.
    pub fn evolve(&self, u: &PureState, t: f64) -> DVector<Complex64> {
        let mut out = DVector::<Complex64>::zeros(self.dim());
        for (lambda, p) in self.eigenvalues.iter().zip(&self.projectors) {
            let proj = p * u.vector();
            let phase = Complex64::from_polar(1.0, t * lambda);
            out.zip_apply(&proj, |acc, e| *acc += phase * Complex::from(e));
        }
        out
    }

    /// Indices of eigenvalues whose projector does not annihilate `u`.
    pub fn eigenvalue_support(&self, u: &PureState, tol: Option<f64>) -> Vec<usize> {
        let tol = tol.unwrap_or(DEFAULT_SUPPORT_TOL);
        self.projectors
            .iter()
            .enumerate()
            .filter(|(_, p)| (*p * u.vector()).norm() > tol)
            .map(|(j, _)| j)
            .collect()
    }

    /// A state is fixed iff its eigenvalue support is a singleton.
    pub fn is_fixed_state(&self, u: &PureState, tol: Option<f64>) -> bool {
        self.eigenvalue_support(u, tol).len() == 1
    }

    /// Check U(tau) u = gamma u; gamma is taken as the phase of
    /// <u, U(tau) u>.
    pub fn is_periodic(&self, u: &PureState, tau: f64, tol: f64) -> TransferWitness {
        let evolved = self.evolve(u, tau);
        let uc = u.vector().map(Complex64::from);
        let inner = uc.dotc(&evolved);
        let gamma = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
        let residual = (&evolved - uc.scale_complex(gamma)).norm();
        TransferWitness {
            kind: WitnessKind::Periodic,
            tau,
            alpha: gamma,
            beta: Complex64::new(0.0, 0.0),
            gamma: Some(gamma),
            residual,
            holds: residual < tol,
            tolerance: tol,
            reframed: false,
        }
    }
}

trait ScaleComplex {
    fn scale_complex(&self, c: Complex64) -> DVector<Complex64>;
}

impl ScaleComplex for DVector<Complex64> {
    fn scale_complex(&self, c: Complex64) -> DVector<Complex64> {
        self.map(|e| e * c)
    }
}

/// Exact spectrum of the cycle C_n and its complement in the Fourier basis.
#[derive(Debug, Clone)]
pub struct CycleSpectrum {
    pub n: usize,
    /// lambda_l = 2 cos(2 pi l / n), l = 0..n-1.
    pub lambdas: Vec<f64>,
    /// Complement eigenvalues: mu_0 = n - lambda_0 - 1, mu_l = -1 - lambda_l.
    pub mus: Vec<f64>,
    /// The primitive n-th root of unity.
    pub omega: Complex64,
}

impl CycleSpectrum {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("cycle needs n >= 3, got {n}")));
        }
        let lambdas: Vec<f64> = (0..n)
            .map(|l| 2.0 * (2.0 * std::f64::consts::PI * l as f64 / n as f64).cos())
            .collect();
        let mut mus: Vec<f64> = lambdas.iter().map(|l| -1.0 - l).collect();
        mus[0] = n as f64 - lambdas[0] - 1.0;
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
        Ok(Self { n, lambdas, mus, omega })
    }

    /// Entry j of the l-th Fourier eigenvector: omega^(l j).
    pub fn eigvec(&self, l: usize, j: usize) -> Complex64 {
        Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * ((l * j) % self.n) as f64 / self.n as f64,
        )
    }

    /// Distinct adjacency eigenvalues, descending, deduplicated within
    /// `tol`.
    pub fn distinct_lambdas(&self, tol: f64) -> Vec<f64> {
        let mut sorted = self.lambdas.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut out: Vec<f64> = Vec::new();
        for l in sorted {
            if out.last().map_or(true, |&last| (last - l).abs() > tol) {
                out.push(l);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{HamiltonianKind, WeightedGraph};
    use approx::assert_abs_diff_eq;

    fn decompose_graph(g: &WeightedGraph, kind: HamiltonianKind) -> SpectralDecomposition {
        SpectralDecomposition::decompose(&g.hamiltonian(kind).unwrap(), None).unwrap()
    }

    #[test]
    fn identity_matrix_single_projector() {
        let dec = SpectralDecomposition::decompose(&DMatrix::identity(4, 4), None).unwrap();
        assert_eq!(dec.eigenvalues(), &[1.0]);
        assert!((dec.projectors()[0].clone() - DMatrix::identity(4, 4)).abs().max() < 1e-12);
    }

    #[test]
    fn c4_spectrum() {
        let dec = decompose_graph(&WeightedGraph::cycle(4).unwrap(), HamiltonianKind::Adjacency);
        let evs = dec.eigenvalues();
        assert_eq!(evs.len(), 3);
        assert_abs_diff_eq!(evs[0], -2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(evs[1], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(evs[2], 2.0, epsilon = 1e-10);
        assert_eq!(dec.multiplicity(0), 1);
        assert_eq!(dec.multiplicity(1), 2);
        assert_eq!(dec.multiplicity(2), 1);
    }

    #[test]
    fn l_k2_spectrum() {
        let dec = decompose_graph(&WeightedGraph::path(2).unwrap(), HamiltonianKind::Laplacian);
        assert_abs_diff_eq!(dec.eigenvalues()[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.eigenvalues()[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn projector_algebra() {
        let g = WeightedGraph::cycle(5).unwrap();
        let dec = decompose_graph(&g, HamiltonianKind::Adjacency);
        let n = dec.dim();
        let tol = 1e-10 * dec.scale().max(1.0);
        let mut sum = DMatrix::zeros(n, n);
        let mut recon = DMatrix::zeros(n, n);
        for (j, p) in dec.projectors().iter().enumerate() {
            sum += p;
            recon += p * dec.eigenvalues()[j];
            for (k, q) in dec.projectors().iter().enumerate() {
                let prod = p * q;
                let expect = if j == k { p.clone() } else { DMatrix::zeros(n, n) };
                assert!((prod - expect).abs().max() < tol);
            }
        }
        assert!((sum - DMatrix::identity(n, n)).abs().max() < tol);
        assert!((recon - g.adjacency()).abs().max() < tol);
    }

    #[test]
    fn transition_at_zero_and_c4_pst_amplitude() {
        let dec = decompose_graph(&WeightedGraph::cycle(4).unwrap(), HamiltonianKind::Adjacency);
        let u0 = dec.transition(0.0);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(u0[(i, j)].re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(u0[(i, j)].im, 0.0, epsilon = 1e-12);
            }
        }
        let u = dec.transition(std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(u[(0, 2)].norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn transition_conjugate_at_negative_time() {
        let dec = decompose_graph(&WeightedGraph::path(4).unwrap(), HamiltonianKind::Adjacency);
        let u = dec.transition(0.7);
        let um = dec.transition(-0.7);
        assert!((um - u.adjoint()).map(|c| c.norm()).max() < 1e-12);
    }

    #[test]
    fn support_examples() {
        let c4 = WeightedGraph::cycle(4).unwrap();
        let dec = decompose_graph(&c4, HamiltonianKind::Adjacency);
        let e0 = PureState::vertex(4, 0).unwrap();
        assert_eq!(dec.eigenvalue_support(&e0, None), vec![0, 1, 2]);

        // (e0+e2)/sqrt(2) is a fixed state in the complement of C4
        let comp = c4.complement().unwrap();
        let dc = decompose_graph(&comp, HamiltonianKind::Adjacency);
        let u = PureState::plus(4, 0, 2).unwrap();
        let support = dc.eigenvalue_support(&u, None);
        assert_eq!(support.len(), 1);
        assert!(dc.is_fixed_state(&u, None));
    }

    #[test]
    fn eigenvector_support_is_singleton_and_periodic() {
        let dec = decompose_graph(&WeightedGraph::path(3).unwrap(), HamiltonianKind::Adjacency);
        // eigenvector of A(P3) for eigenvalue sqrt(2): (1, sqrt2, 1)/2
        let v = PureState::from_vec(vec![0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5]).unwrap();
        assert!(dec.is_fixed_state(&v, None));
        for tau in [0.3, 1.0, 7.7] {
            assert!(dec.is_periodic(&v, tau, 1e-9).holds);
        }
    }

    #[test]
    fn e0_periodic_in_c4_at_pi() {
        let dec = decompose_graph(&WeightedGraph::cycle(4).unwrap(), HamiltonianKind::Adjacency);
        let e0 = PureState::vertex(4, 0).unwrap();
        let w = dec.is_periodic(&e0, std::f64::consts::PI, 1e-9);
        assert!(w.holds);
        let gamma = w.gamma.unwrap();
        assert_abs_diff_eq!(gamma.re, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(gamma.im, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn cycle_exact_spectrum_values() {
        let cs = CycleSpectrum::new(4).unwrap();
        let want_l = [2.0, 0.0, -2.0, 0.0];
        let want_m = [1.0, -1.0, 1.0, -1.0];
        for l in 0..4 {
            assert_abs_diff_eq!(cs.lambdas[l], want_l[l], epsilon = 1e-12);
            assert_abs_diff_eq!(cs.mus[l], want_m[l], epsilon = 1e-12);
        }
        let cs8 = CycleSpectrum::new(8).unwrap();
        let distinct = cs8.distinct_lambdas(1e-10);
        let want = [2.0, std::f64::consts::SQRT_2, 0.0, -std::f64::consts::SQRT_2, -2.0];
        assert_eq!(distinct.len(), 5);
        for (a, b) in distinct.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn cycle_spectrum_symmetry_and_match() {
        for n in [5, 8, 12] {
            let cs = CycleSpectrum::new(n).unwrap();
            for l in 1..n {
                assert_abs_diff_eq!(cs.lambdas[l], cs.lambdas[n - l], epsilon = 1e-12);
            }
            let dec =
                decompose_graph(&WeightedGraph::cycle(n).unwrap(), HamiltonianKind::Adjacency);
            let mut exact = cs.distinct_lambdas(1e-10);
            exact.reverse();
            assert_eq!(dec.eigenvalues().len(), exact.len());
            for (a, b) in dec.eigenvalues().iter().zip(exact) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
            }
        }
    }
}
