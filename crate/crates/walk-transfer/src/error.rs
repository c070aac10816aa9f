use thiserror::Error;

/// Errors raised by graph construction, spectral computation, and the
/// transfer/certificate machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for graph on {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("self-loop on vertex {0} is not allowed; use the potential instead")]
    SelfLoop(usize),
    #[error("edge weight must be finite and nonzero, got {0}")]
    BadWeight(f64),
    #[error("operation requires a simple graph (unit weights, zero potential)")]
    NotSimple,
    #[error("{0}")]
    Domain(String),
    #[error("graphs must have the same vertex count ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("states are linearly dependent")]
    DependentStates,
    #[error("state vector has norm {0}, expected a unit vector")]
    NotUnit(f64),
    #[error("eigensolver failed to converge")]
    EigenFailure,
    #[error("sweep grid step {step} exceeds the resolution limit {limit} for this spectrum; increase the sample count")]
    GridTooCoarse { step: f64, limit: f64 },
    #[error("permutation does not preserve the Hamiltonian")]
    NotAutomorphism,
    #[error("automorphism search supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("no consistent phase exponent for eigenvalue class {0}: pattern undefined")]
    PatternUndefined(usize),
    #[error("support and phase pattern have mismatched lengths ({0} vs {1})")]
    PatternMismatch(usize, usize),
    #[error("malformed partition: {0}")]
    BadPartition(String),
    #[error("invalid graph JSON: {0}")]
    BadGraphJson(String),
    #[error("invalid state spec `{0}`: {1}")]
    BadStateSpec(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;
