//! Many-body content reconstructed from Bogoliubov frames: the vacuum
//! representation with tracked phase, contraction matrices between
//! quasiparticle families at different times, the Pfaffian amplitude engine,
//! and the derived observables (fidelity, transition probability, parity,
//! geometric and braiding phase).

mod amplitude;
mod contraction;
mod observables;
mod vacuum;

pub use amplitude::{amplitude, ElementaryOp, OpAt, StateAt};
pub use contraction::{contraction, OpFamily};
pub use observables::{
    fidelity, geometric_phase_series, parity, wrap_to_pi, LogicalMap,
};
pub use vacuum::{vacuum_energy, FrameData, VacuumRep};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManybodyError {
    #[error(transparent)]
    Skewlin(#[from] crate::skewlin::SkewlinError),
    #[error("missing Bloch-Messiah data for a barred-operator contraction")]
    MissingBlochMessiah,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("adjacent vacuum overlap modulus {modulus:.3} below 0.5; the tracking step is too coarse")]
    PhaseTrackingTooCoarse { modulus: f64 },
    #[error("adjacent state overlap modulus {modulus:.3} below 0.5; the sample grid is too coarse")]
    GridTooCoarse { modulus: f64 },
}
