//! Graph automorphisms: exhaustive search on small graphs and the two
//! automorphism arguments relating plus, pair, and vertex transfer.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::states::PureState;

/// Size cap for the exhaustive automorphism search.
pub const AUTOMORPHISM_SEARCH_MAX: usize = 12;

/// A weight- and potential-preserving vertex permutation, stored as
/// `image[v]` = where `v` maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    image: Vec<usize>,
}

impl Automorphism {
    /// Wrap a permutation after validating it is an automorphism of `g`.
    pub fn new(g: &WeightedGraph, image: Vec<usize>) -> Result<Self> {
        if !is_automorphism(g, &image) {
            return Err(Error::NotAutomorphism);
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// Image of a single vertex.
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// `self` after `other`: (self ∘ other)(v) = self(other(v)).
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let image = other.image.iter().map(|&v| self.image[v]).collect();
        Automorphism { image }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut image = vec![0; self.image.len()];
        for (src, &dst) in self.image.iter().enumerate() {
            image[dst] = src;
        }
        Automorphism { image }
    }

    /// Smallest k >= 1 with P^k = I.
    pub fn order(&self) -> usize {
        let id: Vec<usize> = (0..self.n()).collect();
        let mut current = self.clone();
        let mut k = 1;
        while current.image != id {
            current = self.compose(&current);
            k += 1;
        }
        k
    }

    /// Apply the permutation matrix P to a state: (P u)[P(v)] = u[v].
    pub fn apply_state(&self, u: &PureState) -> Result<PureState> {
        u.permute(&self.image)
    }

    /// True if P fixes the vertex state e_a.
    pub fn fixes(&self, a: usize) -> bool {
        self.image[a] == a
    }
}

fn is_permutation(image: &[usize]) -> bool {
    let n = image.len();
    let mut seen = vec![false; n];
    for &v in image {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Check that `image` is a permutation preserving every edge weight and every
/// potential entry exactly.
pub fn is_automorphism(g: &WeightedGraph, image: &[usize]) -> bool {
    let n = g.n();
    if image.len() != n || !is_permutation(image) {
        return false;
    }
    for v in 0..n {
        if g.potential()[image[v]] != g.potential()[v] {
            return false;
        }
    }
    for (i, j, w) in g.edges() {
        if g.weight(image[i], image[j]) != w {
            return false;
        }
    }
    // Non-edges must map to non-edges; edge counts are preserved under a
    // permutation, and all edges mapped to edges of equal weight implies this.
    true
}

fn search(
    g: &WeightedGraph,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Automorphism>,
) {
    let n = g.n();
    let k = image.len();
    if k == n {
        out.push(Automorphism { image: image.clone() });
        return;
    }
    'candidates: for c in 0..n {
        if used[c] || g.potential()[c] != g.potential()[k] || g.degree(c) != g.degree(k) {
            continue;
        }
        for j in 0..k {
            if g.weight(k, j) != g.weight(c, image[j]) {
                continue 'candidates;
            }
        }
        image.push(c);
        used[c] = true;
        search(g, image, used, out);
        used[c] = false;
        image.pop();
    }
}

/// Exhaustively list all automorphisms of `g` (n <= 12). The identity is
/// always present and the result is closed under composition and inverse.
pub fn find_automorphisms(g: &WeightedGraph) -> Result<Vec<Automorphism>> {
    if g.n() > AUTOMORPHISM_SEARCH_MAX {
        return Err(Error::TooLarge { n: g.n(), max: AUTOMORPHISM_SEARCH_MAX });
    }
    let mut out = Vec::new();
    search(g, &mut Vec::with_capacity(g.n()), &mut vec![false; g.n()], &mut out);
    Ok(out)
}

/// Outcome of the pair-from-plus derivation.
#[derive(Debug, Clone)]
pub enum PairFromPlus {
    /// A condition held and the derived source/target states are genuine
    /// pair states: attested plus PGST (a,b) -> (c,d) implies pair PGST
    /// between them.
    Derived { condition: u8, source: PureState, target: PureState },
    /// The target difference collapses to zero (P swaps c and d): the
    /// attested plus PGST is inconsistent with this automorphism.
    Contradiction { condition: u8 },
    /// Neither condition of the derivation applies to this automorphism.
    NotApplicable,
}

fn difference_state(n: usize, plus: &[usize], p: &Automorphism) -> Result<Option<PureState>> {
    let mut v = vec![0.0f64; n];
    for &x in plus {
        v[x] += 1.0;
        v[p.apply(x)] -= 1.0;
    }
    if v.iter().all(|&x| x == 0.0) {
        return Ok(None);
    }
    Ok(Some(PureState::normalized(v)?))
}

/// True when a normalized vector has exactly two nonzero entries of opposite
/// sign and equal magnitude 1/sqrt(2).
fn is_pair_state(u: &PureState) -> bool {
    let mut pos = 0usize;
    let mut neg = 0usize;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for &x in u.vector().iter() {
        if x == 0.0 {
            continue;
        }
        if (x.abs() - h).abs() > 1e-12 {
            return false;
        }
        if x > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    pos == 1 && neg == 1
}

/// Given attested plus PGST (e_a+e_b)/sqrt(2) -> (e_c+e_d)/sqrt(2) and an
/// automorphism P, derive the implied pair transfer when P fixes a but moves
/// b (condition 1) or swaps a into b without swapping back (condition 2).
/// This is a derivation tool: it assumes the plus PGST, it does not prove it.
pub fn pair_pgst_from_plus(
    g: &WeightedGraph,
    p: &Automorphism,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Result<PairFromPlus> {
    for &v in &[a, b, c, d] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { index: v, n: g.n() });
        }
    }
    if !is_automorphism(g, p.image()) {
        return Err(Error::NotAutomorphism);
    }
    let condition = if p.fixes(a) && !p.fixes(b) {
        1u8
    } else if p.apply(a) == b && p.apply(b) != a {
        2u8
    } else {
        return Ok(PairFromPlus::NotApplicable);
    };
    let source = difference_state(g.n(), &[a, b], p)?
        .expect("source difference is nonzero under either condition");
    match difference_state(g.n(), &[c, d], p)? {
        None => Ok(PairFromPlus::Contradiction { condition }),
        Some(target) => {
            if is_pair_state(&target) {
                Ok(PairFromPlus::Derived { condition, source, target })
            } else {
                // Norms of source and target must agree under a unitary; a
                // non-pair target also contradicts the attested plus PGST.
                Ok(PairFromPlus::Contradiction { condition })
            }
        }
    }
}

/// Certify that no PGST exists between e_a and any plus state supported on b:
/// true iff P is an automorphism fixing b but not a.
pub fn automorphism_blocks_plus_pgst(
    g: &WeightedGraph,
    p: &Automorphism,
    a: usize,
    b: usize,
) -> Result<bool> {
    if a >= g.n() {
        return Err(Error::VertexOutOfRange { index: a, n: g.n() });
    }
    if b >= g.n() {
        return Err(Error::VertexOutOfRange { index: b, n: g.n() });
    }
    if !is_automorphism(g, p.image()) {
        return Err(Error::NotAutomorphism);
    }
    Ok(p.fixes(b) && !p.fixes(a))
}
