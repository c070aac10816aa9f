//! Real pure states over the vertex set: vertex states, plus/pair states,
//! and general s-pair states.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// A real unit vector over the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<f64>,
}

impl PureState {
    /// Wrap an explicit vector; the norm must be 1 within 1e-12.
    pub fn from_vec(v: Vec<f64>) -> Result<Self> {
        let amplitudes = DVector::from_vec(v);
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize a nonzero vector into a state.
    pub fn normalized(v: Vec<f64>) -> Result<Self> {
        let mut amplitudes = DVector::from_vec(v);
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnit(norm));
        }
        amplitudes /= norm;
        Ok(Self { amplitudes })
    }

    /// The vertex state e_a.
    pub fn vertex(n: usize, a: usize) -> Result<Self> {
        if a >= n {
            return Err(Error::VertexOutOfRange { index: a, n });
        }
        let mut v = DVector::zeros(n);
        v[a] = 1.0;
        Ok(Self { amplitudes: v })
    }

    /// The s-pair state (e_a + s e_b) / sqrt(1 + s^2).
    pub fn s_pair(n: usize, a: usize, b: usize, s: f64) -> Result<Self> {
        if a >= n {
            return Err(Error::VertexOutOfRange { index: a, n });
        }
        if b >= n {
            return Err(Error::VertexOutOfRange { index: b, n });
        }
        if a == b {
            return Err(Error::Domain("s-pair state needs two distinct vertices".into()));
        }
        if s == 0.0 || !s.is_finite() {
            return Err(Error::Domain(format!("s-pair parameter must be nonzero and finite, got {s}")));
        }
        let norm = (1.0 + s * s).sqrt();
        let mut v = DVector::zeros(n);
        v[a] = 1.0 / norm;
        v[b] = s / norm;
        Ok(Self { amplitudes: v })
    }

    /// Plus state (e_a + e_b) / sqrt(2).
    pub fn plus(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::s_pair(n, a, b, 1.0)
    }

    /// Pair state (e_a - e_b) / sqrt(2).
    pub fn pair(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::s_pair(n, a, b, -1.0)
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.amplitudes
    }

    pub fn dot(&self, other: &PureState) -> f64 {
        self.amplitudes.dot(&other.amplitudes)
    }

    /// Apply a vertex permutation `P` given as `image[v]` = where v maps to.
    pub fn permute(&self, image: &[usize]) -> Result<Self> {
        if image.len() != self.n() {
            return Err(Error::SizeMismatch(image.len(), self.n()));
        }
        let mut v = DVector::zeros(self.n());
        for (src, &dst) in image.iter().enumerate() {
            v[dst] = self.amplitudes[src];
        }
        Ok(Self { amplitudes: v })
    }
}

/// Parse the CLI state syntax: `v:a`, `plus:a,b`, `pair:a,b`, `spair:a,b,s`,
/// or an explicit JSON array of amplitudes.
pub fn parse_state_spec(spec: &str, n: usize) -> Result<PureState> {
    let bad = |msg: &str| Error::BadStateSpec(spec.to_string(), msg.to_string());
    if spec.trim_start().starts_with('[') {
        let v: Vec<f64> =
            serde_json::from_str(spec).map_err(|e| bad(&format!("invalid JSON vector: {e}")))?;
        if v.len() != n {
            return Err(bad(&format!("vector length {} does not match n = {n}", v.len())));
        }
        return PureState::from_vec(v);
    }
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected v:a, plus:a,b, pair:a,b, spair:a,b,s, or a JSON vector"))?;
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    let idx = |p: &str| p.parse::<usize>().map_err(|_| bad(&format!("bad vertex index `{p}`")));
    match (head, parts.as_slice()) {
        ("v", [a]) => PureState::vertex(n, idx(a)?),
        ("plus", [a, b]) => PureState::plus(n, idx(a)?, idx(b)?),
        ("pair", [a, b]) => PureState::pair(n, idx(a)?, idx(b)?),
        ("spair", [a, b, s]) => {
            let s: f64 = s.parse().map_err(|_| bad(&format!("bad s value `{s}`")))?;
            PureState::s_pair(n, idx(a)?, idx(b)?, s)
        }
        _ => Err(bad("expected v:a, plus:a,b, pair:a,b, or spair:a,b,s")),
    }
}
