//! Weighted graphs with vertex potential, the Hamiltonians built from them,
//! and the constructions used throughout: complement, union, join, circulants,
//! double covers, and the weighted path families.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected graph on vertices `0..n` with real edge weights and a
/// per-vertex potential. Loops are expressed through the potential, never
/// as edges.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    /// Keys are ordered pairs (i, j) with i < j.
    edges: BTreeMap<(usize, usize), f64>,
    potential: Vec<f64>,
}

/// Which Hamiltonian to associate with a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HamiltonianKind {
    Adjacency,
    Laplacian,
    SignlessLaplacian,
    AdjacencyPlusPotential,
}

impl HamiltonianKind {
    pub const ALL: [HamiltonianKind; 3] = [
        HamiltonianKind::Adjacency,
        HamiltonianKind::Laplacian,
        HamiltonianKind::SignlessLaplacian,
    ];
}

/// Constants (delta, zeta) in the complement identity
/// `M(complement) = delta*J + zeta*I - M(G)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplementParams {
    pub delta: f64,
    pub zeta: f64,
}

impl ComplementParams {
    pub fn for_kind(kind: HamiltonianKind, n: usize) -> Result<Self> {
        let nf = n as f64;
        match kind {
            HamiltonianKind::Adjacency => Ok(Self { delta: 1.0, zeta: -1.0 }),
            HamiltonianKind::Laplacian => Ok(Self { delta: -1.0, zeta: nf }),
            HamiltonianKind::SignlessLaplacian => Ok(Self { delta: 1.0, zeta: nf - 2.0 }),
            HamiltonianKind::AdjacencyPlusPotential => Err(Error::Domain(
                "complement identity is defined for A, L, Q only".into(),
            )),
        }
    }
}

/// Constants (eta, delta) in the double-cover block Hamiltonians
/// `M(G_pm) = eta*D + delta*(A(X1) +/- A(X2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleCoverParams {
    pub eta: f64,
    pub delta: f64,
}

impl DoubleCoverParams {
    pub fn for_kind(kind: HamiltonianKind) -> Result<Self> {
        match kind {
            HamiltonianKind::Adjacency => Ok(Self { eta: 0.0, delta: 1.0 }),
            HamiltonianKind::Laplacian => Ok(Self { eta: 1.0, delta: -1.0 }),
            HamiltonianKind::SignlessLaplacian => Ok(Self { eta: 1.0, delta: 1.0 }),
            HamiltonianKind::AdjacencyPlusPotential => Err(Error::Domain(
                "double cover is defined for A, L, Q only".into(),
            )),
        }
    }
}

/// Weighted path shapes from the quotient constructions: plain paths,
/// sqrt(2)-end-weight paths, potential-at-ends paths, and paths with
/// pendant pairs attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathVariant {
    Plain,
    Sqrt2BothEnds,
    Sqrt2OneEndPot,
    PotBothEnds,
    PendantsOneEnd,
    PendantsBothEnds,
}

impl WeightedGraph {
    /// Empty graph (no edges, zero potential) on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: BTreeMap::new(), potential: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let key = (i.min(j), i.max(j));
        self.edges.get(&key).copied().unwrap_or(0.0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) != 0.0
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { index: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if !w.is_finite() || w == 0.0 {
            return Err(Error::BadWeight(w));
        }
        self.edges.insert((i.min(j), i.max(j)), w);
        Ok(())
    }

    pub fn set_potential(&mut self, v: usize, p: f64) -> Result<()> {
        self.check_vertex(v)?;
        if !p.is_finite() {
            return Err(Error::BadWeight(p));
        }
        self.potential[v] = p;
        Ok(())
    }

    /// A graph is simple iff every weight is exactly 1 and the potential
    /// vanishes.
    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&w| w == 1.0) && self.potential.iter().all(|&p| p == 0.0)
    }

    fn require_simple(&self) -> Result<()> {
        if self.is_simple() {
            Ok(())
        } else {
            Err(Error::NotSimple)
        }
    }

    /// Weighted degree of a vertex.
    pub fn degree(&self, v: usize) -> f64 {
        (0..self.n).map(|u| self.weight(v, u)).sum()
    }

    /// Adjacency matrix A with A[i,j] = w(i,j).
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (&(i, j), &w) in &self.edges {
            a[(i, j)] = w;
            a[(j, i)] = w;
        }
        a
    }

    /// The Hamiltonian of the requested kind. L and Q are only defined on
    /// simple graphs.
    pub fn hamiltonian(&self, kind: HamiltonianKind) -> Result<DMatrix<f64>> {
        let a = self.adjacency();
        match kind {
            HamiltonianKind::Adjacency => Ok(a),
            HamiltonianKind::AdjacencyPlusPotential => {
                let mut m = a;
                for v in 0..self.n {
                    m[(v, v)] += self.potential[v];
                }
                Ok(m)
            }
            HamiltonianKind::Laplacian => {
                self.require_simple()?;
                let mut m = -a;
                for v in 0..self.n {
                    m[(v, v)] = self.degree(v);
                }
                Ok(m)
            }
            HamiltonianKind::SignlessLaplacian => {
                self.require_simple()?;
                let mut m = a;
                for v in 0..self.n {
                    m[(v, v)] = self.degree(v);
                }
                Ok(m)
            }
        }
    }

    /// Complement of a simple graph on the same vertex set.
    pub fn complement(&self) -> Result<WeightedGraph> {
        self.require_simple()?;
        let mut g = WeightedGraph::empty(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    g.add_edge(i, j, 1.0)?;
                }
            }
        }
        Ok(g)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n`.
    pub fn union(&self, other: &WeightedGraph) -> WeightedGraph {
        let mut g = WeightedGraph::empty(self.n + other.n);
        for (&(i, j), &w) in &self.edges {
            g.edges.insert((i, j), w);
        }
        for (&(i, j), &w) in &other.edges {
            g.edges.insert((i + self.n, j + self.n), w);
        }
        g.potential[..self.n].copy_from_slice(&self.potential);
        g.potential[self.n..].copy_from_slice(&other.potential);
        g
    }

    /// Join of two simple graphs: disjoint union plus all cross edges.
    pub fn join(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.require_simple()?;
        other.require_simple()?;
        let mut g = self.union(other);
        for i in 0..self.n {
            for j in 0..other.n {
                g.add_edge(i, self.n + j, 1.0)?;
            }
        }
        Ok(g)
    }

    /// Circulant graph over Z_n with connection set `s`. Requires
    /// `s = -s mod n` and `0 not in s`.
    pub fn circulant(n: usize, s: &[usize]) -> Result<WeightedGraph> {
        for &r in s {
            if r == 0 || r >= n {
                return Err(Error::Domain(format!(
                    "connection set residue {r} out of range 1..{n}"
                )));
            }
            if !s.contains(&(n - r)) {
                return Err(Error::Domain(format!(
                    "connection set is not symmetric: contains {r} but not {}",
                    n - r
                )));
            }
        }
        let mut g = WeightedGraph::empty(n);
        for j in 0..n {
            for &r in s {
                let k = (j + r) % n;
                if j != k {
                    g.add_edge(j, k, 1.0)?;
                }
            }
        }
        Ok(g)
    }

    /// The cycle C_n.
    pub fn cycle(n: usize) -> Result<WeightedGraph> {
        if n < 3 {
            return Err(Error::Domain(format!("cycle needs n >= 3, got {n}")));
        }
        WeightedGraph::circulant(n, &[1, n - 1])
    }

    /// Path on n vertices, edges {i, i+1}.
    pub fn path(n: usize) -> Result<WeightedGraph> {
        if n < 1 {
            return Err(Error::Domain("path needs n >= 1".into()));
        }
        let mut g = WeightedGraph::empty(n);
        for i in 0..n.saturating_sub(1) {
            g.add_edge(i, i + 1, 1.0)?;
        }
        Ok(g)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> WeightedGraph {
        let mut g = WeightedGraph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j, 1.0).unwrap();
            }
        }
        g
    }

    /// Two-layer graph with within-layer edges from `x1` and cross-layer
    /// edges from `x2`; vertex `(layer, v)` is flattened as `layer*n + v`.
    /// The boolean flag is true when the edge sets of `x1` and `x2`
    /// intersect, in which case the result is not a genuine double cover.
    pub fn double_cover(x1: &WeightedGraph, x2: &WeightedGraph) -> Result<(WeightedGraph, bool)> {
        if x1.n != x2.n {
            return Err(Error::SizeMismatch(x1.n, x2.n));
        }
        x1.require_simple()?;
        x2.require_simple()?;
        let n = x1.n;
        let mut g = WeightedGraph::empty(2 * n);
        for (i, j, w) in x1.edges() {
            g.add_edge(i, j, w)?;
            g.add_edge(n + i, n + j, w)?;
        }
        for (i, j, w) in x2.edges() {
            g.add_edge(i, n + j, w)?;
            g.add_edge(j, n + i, w)?;
        }
        let overlap = x1.edges().any(|(i, j, _)| x2.has_edge(i, j));
        Ok((g, overlap))
    }

    /// The weighted path families arising as symmetrized quotients of
    /// cycles. `n` is the number of path vertices (for the pendant
    /// variants, the pendants come on top of the path of the underlying
    /// quotient, see each arm).
    pub fn path_family(n: usize, variant: PathVariant) -> Result<WeightedGraph> {
        let too_small = |min: usize| {
            Error::Domain(format!("path family needs n >= {min} for this variant, got {n}"))
        };
        match variant {
            PathVariant::Plain => {
                if n < 2 {
                    return Err(too_small(2));
                }
                WeightedGraph::path(n)
            }
            PathVariant::Sqrt2BothEnds => {
                if n < 3 {
                    return Err(too_small(3));
                }
                let mut g = WeightedGraph::path(n)?;
                g.add_edge(0, 1, std::f64::consts::SQRT_2)?;
                g.add_edge(n - 2, n - 1, std::f64::consts::SQRT_2)?;
                Ok(g)
            }
            PathVariant::Sqrt2OneEndPot => {
                if n < 2 {
                    return Err(too_small(2));
                }
                let mut g = WeightedGraph::path(n)?;
                g.add_edge(0, 1, std::f64::consts::SQRT_2)?;
                g.set_potential(n - 1, 1.0)?;
                Ok(g)
            }
            PathVariant::PotBothEnds => {
                if n < 2 {
                    return Err(too_small(2));
                }
                let mut g = WeightedGraph::path(n)?;
                g.set_potential(0, 1.0)?;
                g.set_potential(n - 1, 1.0)?;
                Ok(g)
            }
            PathVariant::PendantsOneEnd => {
                // Pendants 0, 1 attached to vertex 2; path 2..=n; potential 1
                // at the far end. Quotient over {0,1} singletons-elsewhere is
                // the Sqrt2OneEndPot path on n vertices.
                if n < 2 {
                    return Err(too_small(2));
                }
                let mut g = WeightedGraph::empty(n + 1);
                g.add_edge(0, 2, 1.0)?;
                g.add_edge(1, 2, 1.0)?;
                for v in 2..n {
                    g.add_edge(v, v + 1, 1.0)?;
                }
                g.set_potential(n, 1.0)?;
                Ok(g)
            }
            PathVariant::PendantsBothEnds => {
                // Pendants 0, 1 at one end and n, n+1 at the other; path
                // 2..=n-1 in between. Quotient is the Sqrt2BothEnds path on
                // n vertices.
                if n < 3 {
                    return Err(too_small(3));
                }
                let mut g = WeightedGraph::empty(n + 2);
                g.add_edge(0, 2, 1.0)?;
                g.add_edge(1, 2, 1.0)?;
                for v in 2..n - 1 {
                    g.add_edge(v, v + 1, 1.0)?;
                }
                g.add_edge(n - 1, n, 1.0)?;
                g.add_edge(n - 1, n + 1, 1.0)?;
                Ok(g)
            }
        }
    }

    /// Apply a vertex permutation: vertex v of the result is vertex
    /// `perm[v]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<WeightedGraph> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(perm.len(), self.n));
        }
        let mut g = WeightedGraph::empty(self.n);
        for v in 0..self.n {
            g.potential[v] = self.potential[perm[v]];
        }
        let mut inv = vec![0; self.n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        for (i, j, w) in self.edges() {
            g.add_edge(inv[i], inv[j], w)?;
        }
        Ok(g)
    }
}

/// Wire format for graphs: `{"n": int, "edges": [[i, j, w], ...],
/// "potential": [...]}` with `i < j` required on input.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<f64>>,
}

impl WeightedGraph {
    pub fn from_json(text: &str) -> Result<WeightedGraph> {
        let parsed: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::BadGraphJson(e.to_string()))?;
        let mut g = WeightedGraph::empty(parsed.n);
        for (i, j, w) in parsed.edges {
            if i >= j {
                return Err(Error::BadGraphJson(format!(
                    "edge [{i}, {j}] must satisfy i < j"
                )));
            }
            g.add_edge(i, j, w)?;
        }
        if let Some(pot) = parsed.potential {
            if pot.len() != parsed.n {
                return Err(Error::BadGraphJson(format!(
                    "potential has length {} but n = {}",
                    pot.len(),
                    parsed.n
                )));
            }
            for (v, p) in pot.into_iter().enumerate() {
                g.set_potential(v, p)?;
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let potential = if self.potential.iter().all(|&p| p == 0.0) {
            None
        } else {
            Some(self.potential.clone())
        };
        let doc = GraphJson {
            n: self.n,
            edges: self.edges().collect(),
            potential,
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }
}
