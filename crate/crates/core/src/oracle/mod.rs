//! Exact many-body reference in the full 2^N Fock space for small N: state
//! construction (Thouless and Bloch-Messiah product forms), sparse
//! Hamiltonian application, Krylov time evolution, and exact overlaps. This
//! module is the ground truth every Pfaffian-engine quantity is checked
//! against.

mod evolve;
mod fock;
mod hamiltonian;
mod states;

pub use evolve::{evolve_fock, lanczos_exp_step, FockEvolveConfig};
pub use fock::{
    apply_annihilate, apply_create, apply_linear, fock_overlap, FockVector, SiteOp,
    DEFAULT_SITE_CAP,
};
pub use hamiltonian::{enumerate_quasiparticle_spectrum, fock_hamiltonian, FockOperator};
pub use states::{apply_quasiparticle, product_state_vacuum, thouless_state, QuasiKind};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("system of {n} sites exceeds the Fock-space cap of {cap}; pass the large-system opt-in to override")]
    OverCap { n: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("U is numerically singular (condition {cond:.3e}); use the product-state construction instead")]
    SingularU { cond: f64 },
    #[error("Lanczos breakdown: {0}")]
    LanczosBreakdown(String),
}
