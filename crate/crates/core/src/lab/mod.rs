//! Dense-matrix oracle: random instances, functional calculus, commutator norms,
//! sweeps against bound curves and the square-root probe.

pub mod calculus;
pub mod dense;
pub mod eigen;
pub mod probe;
pub mod random;
pub mod sweep;

use serde::Serialize;

pub use calculus::{block_identities, block_pair, hermitian_calculus, lower_bound_instance, unitary_calculus, BlockIdentities};
pub use dense::{commutator, commutator_norm, op_norm, DenseMatrix, MAX_DIM};
pub use eigen::{hermitian_eigen, jacobi_eigen, unitary_eigen, UnitaryEigen};
pub use probe::{probe_max_commutator, probe_with_restarts, ProbeResult};
pub use random::{ginibre, haar_unitary, random_contraction, random_positive_contraction, record_seed, rng_for, SpectrumMode};
pub use sweep::{
    commuting_smoke, diagonal_witness, folk_trials, FolkTrials, instance, measure_pair, sample_sweep, ContractionFamily, InstancePair, Role,
    SampleRecord, SweepOutcome, SweepSpec, Target, VIOLATION_TOL,
};

/// Everything needed to replay a bound violation.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    pub schema_version: u32,
    pub base_seed: u64,
    pub record_seed: u64,
    pub index: u64,
    pub dim: usize,
    pub role: Role,
    pub function: String,
    pub delta: f64,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub x: DenseMatrix,
    pub a: DenseMatrix,
}
