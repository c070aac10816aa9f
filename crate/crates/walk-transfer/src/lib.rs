//! Continuous-time quantum walks on weighted graphs with potential:
//! spectral decompositions, perfect state transfer and fractional revival
//! checks, pretty-good-state-transfer search and certification, and
//! equitable-partition quotients.

pub mod error;
pub mod graph;
pub mod pgst;
pub mod quotient;
pub mod spectral;
pub mod states;
pub mod transfer;

pub use error::{Error, Result};
pub use graph::{HamiltonianKind, PathVariant, WeightedGraph};
pub use spectral::{CycleSpectrum, SpectralDecomposition};
pub use states::PureState;
pub use transfer::TransferWitness;
