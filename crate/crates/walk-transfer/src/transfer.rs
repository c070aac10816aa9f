//! Perfect state transfer and fractional revival checks at a given time,
//! the complement-transfer identities, and the double-cover factorization.

use nalgebra::{Complex, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{ComplementParams, DoubleCoverParams, HamiltonianKind, WeightedGraph};
use crate::spectral::SpectralDecomposition;
use crate::states::PureState;

pub const DEFAULT_CHECK_TOL: f64 = 1e-8;

fn ser_complex<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Cx {
        re: f64,
        im: f64,
    }
    Cx { re: c.re, im: c.im }.serialize(s)
}

fn ser_opt_complex<S: Serializer>(
    c: &Option<Complex64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(c) => ser_complex(c, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Pst,
    Fr,
    Periodic,
}

/// Outcome of a PST / FR / periodicity check at a fixed time.
#[derive(Debug, Clone, Serialize)]
pub struct TransferWitness {
    pub kind: WitnessKind,
    pub tau: f64,
    #[serde(serialize_with = "ser_complex")]
    pub alpha: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub beta: Complex64,
    #[serde(serialize_with = "ser_opt_complex")]
    pub gamma: Option<Complex64>,
    pub residual: f64,
    pub holds: bool,
    pub tolerance: f64,
    /// Set when a non-orthogonal target was orthonormalized against the
    /// source before reading off beta.
    pub reframed: bool,
}

fn to_complex(v: &DVector<f64>) -> DVector<Complex64> {
    v.map(Complex::from)
}

fn unit_phase(c: Complex64) -> Complex64 {
    let r = c.norm();
    if r > 0.0 {
        c / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn check_independent(u: &PureState, v: &PureState) -> Result<()> {
    if u.n() != v.n() {
        return Err(Error::SizeMismatch(u.n(), v.n()));
    }
    if u.dot(v).abs() > 1.0 - 1e-12 {
        return Err(Error::DependentStates);
    }
    Ok(())
}

/// The transfer fidelity |<v, U(t) u>|.
pub fn fidelity(dec: &SpectralDecomposition, u: &PureState, v: &PureState, t: f64) -> f64 {
    let evolved = dec.evolve(u, t);
    to_complex(v.vector()).dotc(&evolved).norm()
}

/// Check perfect state transfer U(tau) u = gamma v.
pub fn check_pst(
    dec: &SpectralDecomposition,
    u: &PureState,
    v: &PureState,
    tau: f64,
    tol: f64,
) -> Result<TransferWitness> {
    check_independent(u, v)?;
    let evolved = dec.evolve(u, tau);
    let vc = to_complex(v.vector());
    let inner = vc.dotc(&evolved);
    let gamma = unit_phase(inner);
    let residual = (&evolved - vc.map(|e| e * gamma)).norm();
    Ok(TransferWitness {
        kind: WitnessKind::Pst,
        tau,
        alpha: Complex64::new(0.0, 0.0),
        beta: inner,
        gamma: Some(gamma),
        residual,
        holds: residual < tol,
        tolerance: tol,
        reframed: false,
    })
}

/// FR amplitudes of U(tau) u in the (u, v) frame; v is orthonormalized
/// against u when the states are not orthogonal.
fn fr_amplitudes(
    dec: &SpectralDecomposition,
    u: &PureState,
    v: &PureState,
    tau: f64,
) -> Result<(Complex64, Complex64, f64, bool)> {
    check_independent(u, v)?;
    let overlap = u.dot(v);
    let reframed = overlap.abs() > 1e-12;
    let v_frame = if reframed {
        let mut w = v.vector() - u.vector() * overlap;
        w /= w.norm();
        w
    } else {
        v.vector().clone()
    };
    let evolved = dec.evolve(u, tau);
    let uc = to_complex(u.vector());
    let vc = to_complex(&v_frame);
    let alpha = uc.dotc(&evolved);
    let beta = vc.dotc(&evolved);
    let residual = (&evolved - uc.map(|e| e * alpha) - vc.map(|e| e * beta)).norm();
    Ok((alpha, beta, residual, reframed))
}

/// Check fractional revival U(tau) u = alpha u + beta v with beta != 0.
pub fn check_fr(
    dec: &SpectralDecomposition,
    u: &PureState,
    v: &PureState,
    tau: f64,
    tol: f64,
) -> Result<TransferWitness> {
    let (alpha, beta, residual, reframed) = fr_amplitudes(dec, u, v, tau)?;
    Ok(TransferWitness {
        kind: WitnessKind::Fr,
        tau,
        alpha,
        beta,
        gamma: None,
        residual,
        holds: residual < tol && beta.norm() > tol,
        tolerance: tol,
        reframed,
    })
}

/// Result of the Krylov orthogonality test and the complement transition
/// identity it licenses.
#[derive(Debug, Clone, Serialize)]
pub struct KrylovReport {
    /// Whether 1 is orthogonal to u, M u, ..., M^(n-1) u.
    pub krylov_holds: bool,
    /// First power k at which the orthogonality fails, with the value of
    /// the normalized inner product.
    pub first_violation: Option<(usize, f64)>,
    /// (t, deviation) for each sampled time; empty when the Krylov test
    /// fails.
    pub identity_deviations: Vec<(f64, f64)>,
    pub identity_holds: bool,
    pub tolerance: f64,
}

/// Check that 1 annihilates the Krylov space of u, and when it does,
/// verify U_complement(t) u = exp(it zeta) U(-t) u at the sampled times.
pub fn krylov_complement_identity(
    g: &WeightedGraph,
    kind: HamiltonianKind,
    u: &PureState,
    t_samples: &[f64],
) -> Result<KrylovReport> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = g.n();
    let m = g.hamiltonian(kind)?;
    let krylov_tol = 1e-9 * n as f64;

    let mut w = u.vector().clone();
    let mut first_violation = None;
    for k in 0..n {
        let ip: f64 = w.iter().sum();
        if ip.abs() > krylov_tol {
            first_violation = Some((k, ip));
            break;
        }
        w = &m * w;
        let norm = w.norm();
        if norm > 0.0 {
            w /= norm;
        }
    }
    let krylov_holds = first_violation.is_none();

    let mut identity_deviations = Vec::new();
    let mut identity_holds = krylov_holds;
    let tol = 1e-8;
    if krylov_holds {
        let zeta = ComplementParams::for_kind(kind, n)?.zeta;
        let dec = SpectralDecomposition::decompose(&m, None)?;
        let comp = g.complement()?;
        let dec_comp = SpectralDecomposition::decompose(&comp.hamiltonian(kind)?, None)?;
        for &t in t_samples {
            let lhs = dec_comp.evolve(u, t);
            let phase = Complex64::from_polar(1.0, t * zeta);
            let rhs = dec.evolve(u, -t).map(|e| e * phase);
            let dev = (lhs - rhs).norm();
            if dev >= tol {
                identity_holds = false;
            }
            identity_deviations.push((t, dev));
        }
    }
    Ok(KrylovReport {
        krylov_holds,
        first_violation,
        identity_deviations,
        identity_holds,
        tolerance: tol,
    })
}

/// Result of transporting an FR instance to the graph complement.
#[derive(Debug, Clone, Serialize)]
pub struct ComplementTransportReport {
    /// False when the all-ones vector is an eigenvector but n*tau is not a
    /// multiple of 2*pi; the complement claim is then unasserted.
    pub applicable: bool,
    pub base_witness: TransferWitness,
    /// FR witness in the complement at -tau, when applicable.
    pub complement_witness: Option<TransferWitness>,
    /// Deviation of the complement amplitudes from
    /// exp(-i tau zeta) * (alpha, beta).
    pub phase_deviation: Option<f64>,
    pub holds: bool,
}

/// Transport FR from a graph to its complement: requires 1 to be an
/// eigenvector and n*tau in 2*pi*Z.
pub fn complement_fr_transport(
    g: &WeightedGraph,
    kind: HamiltonianKind,
    u: &PureState,
    v: &PureState,
    tau: f64,
    tol: f64,
) -> Result<ComplementTransportReport> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = g.n();
    let m = g.hamiltonian(kind)?;
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let m1 = &m * &ones;
    let ev = ones.dot(&m1);
    if (&m1 - &ones * ev).norm() > 1e-9 * (1.0 + ev.abs()) {
        return Err(Error::Domain("the all-ones vector is not an eigenvector".into()));
    }

    let dec = SpectralDecomposition::decompose(&m, None)?;
    let base_witness = check_fr(&dec, u, v, tau, tol)?;

    // distance of n*tau to the nearest multiple of 2*pi
    let x = n as f64 * tau / (2.0 * std::f64::consts::PI);
    let angular = (x - x.round()).abs() * 2.0 * std::f64::consts::PI;
    if angular > 1e-9 {
        return Ok(ComplementTransportReport {
            applicable: false,
            base_witness,
            complement_witness: None,
            phase_deviation: None,
            holds: false,
        });
    }

    let zeta = ComplementParams::for_kind(kind, n)?.zeta;
    let comp = g.complement()?;
    let dec_comp = SpectralDecomposition::decompose(&comp.hamiltonian(kind)?, None)?;
    let comp_witness = check_fr(&dec_comp, u, v, -tau, tol)?;
    let phase = Complex64::from_polar(1.0, -tau * zeta);
    let dev = ((comp_witness.alpha - phase * base_witness.alpha).norm())
        .max((comp_witness.beta - phase * base_witness.beta).norm());
    let holds = base_witness.holds && comp_witness.holds && dev < 10.0 * tol;
    Ok(ComplementTransportReport {
        applicable: true,
        base_witness,
        complement_witness: Some(comp_witness),
        phase_deviation: Some(dev),
        holds,
    })
}

/// Deviation report for the block factorization of the double-cover
/// transition matrix.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleCoverBlockReport {
    pub t: f64,
    pub max_deviation: f64,
    pub holds: bool,
    pub tolerance: f64,
    /// True when X1 and X2 share edges; the construction is then not a
    /// genuine double cover.
    pub overlap_warning: bool,
}

fn quotient_pair_hamiltonians(
    x1: &WeightedGraph,
    x2: &WeightedGraph,
    kind: HamiltonianKind,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let params = DoubleCoverParams::for_kind(kind)?;
    let n = x1.n();
    let a1 = x1.adjacency();
    let a2 = x2.adjacency();
    let mut d = DMatrix::zeros(n, n);
    for v in 0..n {
        d[(v, v)] = x1.degree(v) + x2.degree(v);
    }
    let m_plus = &d * params.eta + (&a1 + &a2) * params.delta;
    let m_minus = &d * params.eta + (&a1 - &a2) * params.delta;
    Ok((m_plus, m_minus))
}

/// Verify U(cover) against the half-sum/half-difference block formula in
/// terms of U(G_plus) and U(G_minus).
pub fn double_cover_block_identity(
    x1: &WeightedGraph,
    x2: &WeightedGraph,
    kind: HamiltonianKind,
    t: f64,
) -> Result<DoubleCoverBlockReport> {
    let (cover, overlap_warning) = WeightedGraph::double_cover(x1, x2)?;
    let n = x1.n();
    let dec_cover = SpectralDecomposition::decompose(&cover.hamiltonian(kind)?, None)?;
    let u_cover = dec_cover.transition(t);

    let (m_plus, m_minus) = quotient_pair_hamiltonians(x1, x2, kind)?;
    let u_plus = SpectralDecomposition::decompose(&m_plus, None)?.transition(t);
    let u_minus = SpectralDecomposition::decompose(&m_minus, None)?.transition(t);
    let diag = (&u_plus + &u_minus) * Complex64::new(0.5, 0.0);
    let off = (&u_plus - &u_minus) * Complex64::new(0.5, 0.0);

    let mut max_deviation = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            max_deviation = max_deviation
                .max((u_cover[(i, j)] - diag[(i, j)]).norm())
                .max((u_cover[(n + i, n + j)] - diag[(i, j)]).norm())
                .max((u_cover[(i, n + j)] - off[(i, j)]).norm())
                .max((u_cover[(n + i, j)] - off[(i, j)]).norm());
        }
    }
    let tolerance = 1e-8;
    Ok(DoubleCoverBlockReport {
        t,
        max_deviation,
        holds: max_deviation < tolerance,
        tolerance,
        overlap_warning,
    })
}

/// Which of the five FR equivalences between a double cover and its
/// quotient pair to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverFrStatement {
    /// Cover FR from top copy of u to bottom copy of u <=> u periodic for
    /// both G_plus and G_minus with phases alpha+beta and alpha-beta.
    LayerSwap = 1,
    /// Cover FR within the top layer <=> U(G_pm) u = alpha u + beta v for
    /// both signs.
    SameLayer = 2,
    /// Cover FR from top u to bottom v <=> U(G_pm) u = alpha u +/- beta v.
    CrossLayer = 3,
    /// FR in G_plus <=> cover FR between symmetric (plus) lifts.
    PlusLift = 4,
    /// FR in G_minus <=> cover FR between antisymmetric (pair) lifts.
    MinusLift = 5,
}

impl CoverFrStatement {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::LayerSwap),
            2 => Ok(Self::SameLayer),
            3 => Ok(Self::CrossLayer),
            4 => Ok(Self::PlusLift),
            5 => Ok(Self::MinusLift),
            _ => Err(Error::Domain(format!("statement index must be 1..=5, got {i}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverFrReport {
    pub statement: u8,
    #[serde(serialize_with = "ser_complex")]
    pub cover_alpha: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub cover_beta: Complex64,
    pub cover_residual: f64,
    /// Deviation between the two sides of the equivalence: amplitudes on
    /// the quotient-pair side vs. the cover side.
    pub agreement: f64,
    pub holds: bool,
    pub tolerance: f64,
}

fn stacked(top: &DVector<f64>, bottom: &DVector<f64>) -> Result<PureState> {
    let mut v = Vec::with_capacity(top.len() + bottom.len());
    v.extend(top.iter().copied());
    v.extend(bottom.iter().copied());
    PureState::from_vec(v)
}

/// Evaluate one equivalence between FR in a double cover and the spectra
/// of its quotient pair G_plus / G_minus.
pub fn double_cover_fr_equivalence(
    x1: &WeightedGraph,
    x2: &WeightedGraph,
    kind: HamiltonianKind,
    u: &PureState,
    v: &PureState,
    tau: f64,
    statement: CoverFrStatement,
    tol: f64,
) -> Result<CoverFrReport> {
    let n = x1.n();
    if u.n() != n || v.n() != n {
        return Err(Error::SizeMismatch(u.n(), n));
    }
    let (cover, _) = WeightedGraph::double_cover(x1, x2)?;
    let dec_cover = SpectralDecomposition::decompose(&cover.hamiltonian(kind)?, None)?;
    let (m_plus, m_minus) = quotient_pair_hamiltonians(x1, x2, kind)?;
    let dec_plus = SpectralDecomposition::decompose(&m_plus, None)?;
    let dec_minus = SpectralDecomposition::decompose(&m_minus, None)?;

    let zero = DVector::zeros(n);
    let half = std::f64::consts::FRAC_1_SQRT_2;

    let (cover_u, cover_v) = match statement {
        CoverFrStatement::LayerSwap => {
            (stacked(u.vector(), &zero)?, stacked(&zero, u.vector())?)
        }
        CoverFrStatement::SameLayer => {
            (stacked(u.vector(), &zero)?, stacked(v.vector(), &zero)?)
        }
        CoverFrStatement::CrossLayer => {
            (stacked(u.vector(), &zero)?, stacked(&zero, v.vector())?)
        }
        CoverFrStatement::PlusLift => (
            stacked(&(u.vector() * half), &(u.vector() * half))?,
            stacked(&(v.vector() * half), &(v.vector() * half))?,
        ),
        CoverFrStatement::MinusLift => (
            stacked(&(u.vector() * half), &(u.vector() * (-half)))?,
            stacked(&(v.vector() * half), &(v.vector() * (-half)))?,
        ),
    };
    let (cover_alpha, cover_beta, cover_residual, _) =
        fr_amplitudes(&dec_cover, &cover_u, &cover_v, tau)?;

    let agreement = match statement {
        CoverFrStatement::LayerSwap => {
            // u must be periodic under both quotients with phases
            // alpha +/- beta
            let p_plus = to_complex(u.vector()).dotc(&dec_plus.evolve(u, tau));
            let p_minus = to_complex(u.vector()).dotc(&dec_minus.evolve(u, tau));
            let rp = (dec_plus.evolve(u, tau) - to_complex(u.vector()).map(|e| e * p_plus)).norm();
            let rm =
                (dec_minus.evolve(u, tau) - to_complex(u.vector()).map(|e| e * p_minus)).norm();
            (p_plus - (cover_alpha + cover_beta))
                .norm()
                .max((p_minus - (cover_alpha - cover_beta)).norm())
                .max(rp)
                .max(rm)
        }
        CoverFrStatement::SameLayer | CoverFrStatement::CrossLayer => {
            let sign = if statement == CoverFrStatement::SameLayer { 1.0 } else { -1.0 };
            let target_plus = to_complex(u.vector()).map(|e| e * cover_alpha)
                + to_complex(v.vector()).map(|e| e * cover_beta);
            let target_minus = to_complex(u.vector()).map(|e| e * cover_alpha)
                + to_complex(v.vector()).map(|e| e * (cover_beta * sign));
            (dec_plus.evolve(u, tau) - target_plus)
                .norm()
                .max((dec_minus.evolve(u, tau) - target_minus).norm())
        }
        CoverFrStatement::PlusLift | CoverFrStatement::MinusLift => {
            let dec_side = if statement == CoverFrStatement::PlusLift {
                &dec_plus
            } else {
                &dec_minus
            };
            let (a, b, r, _) = fr_amplitudes(dec_side, u, v, tau)?;
            (a - cover_alpha).norm().max((b - cover_beta).norm()).max(r)
        }
    };

    Ok(CoverFrReport {
        statement: statement as u8,
        cover_alpha,
        cover_beta,
        cover_residual,
        agreement,
        holds: cover_residual < tol && agreement < tol,
        tolerance: tol,
    })
}
