//! Pretty-good state transfer: fidelity sweeps, automorphism tooling,
//! phase patterns, integer-relation no-PGST certificates, and closed-form
//! verdicts for cycles and their complements.

pub mod automorphism;
pub mod phase;
pub mod relations;
pub mod sweep;
pub mod verdict;

pub use automorphism::{find_automorphisms, is_automorphism, Automorphism};
pub use phase::{derive_phase_pattern, PhaseClass, PhasePattern};
pub use relations::{
    circulant_support_eigenvalues, detect_circulant, integer_relation_certificate, ExactCosSum,
    NoPgstCertificate, RelationSearchParams, SupportEigenvalue,
};
pub use sweep::{sweep_max_fidelity, FidelityTrace, SweepParams};
pub use verdict::{cycle_pgst_verdict, CycleQuery, CycleVerdict, VerdictEvidence};
