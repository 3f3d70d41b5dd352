//! Many-body Majorana braiding from time-evolved single-particle states.
//!
//! This crate simulates braiding of Majorana zero modes in time-dependent
//! Bogoliubov-de Gennes (BdG) superconductors without ever constructing the
//! exponential many-body Hilbert space. Single-particle Bogoliubov frames
//! `(U(t), V(t))` are propagated through the time-dependent BdG equations;
//! many-body overlaps, transition amplitudes, parities and geometric phases
//! are reconstructed from the frames via the Bloch-Messiah decomposition and
//! Pfaffian contraction formulas (the time-dependent Pfaffian, or TDP,
//! method). An exact Fock-space solver is included as ground truth for small
//! systems.
//!
//! Module map:
//! - [`skewlin`]: Pfaffians, Youla canonical form, Bloch-Messiah
//!   decomposition, Bogoliubov unitarity diagnostics.
//! - [`model`]: lattice geometries (chain, T-junction, multi-T), the Kitaev
//!   BdG operator, braid-move compilation into chemical-potential schedules,
//!   and the initial Bogoliubov frame.
//! - [`evolve`]: unitary propagation of frames (Gauss-Legendre IRK4 and
//!   Krylov integrators).
//! - [`manybody`]: vacuum representation with phase tracking, contraction
//!   matrices, the Pfaffian amplitude engine and derived observables.
//! - [`oracle`]: exact diagonalization in the 2^N Fock space for small N.
//! - [`driver`]: run orchestration (gates, scans, benchmarks), config files
//!   and output writers.

pub mod driver;
pub mod evolve;
pub mod linalg;
pub mod manybody;
pub mod model;
pub mod oracle;
pub mod skewlin;

use num_complex::Complex64;

/// Dense complex matrix used throughout.
pub type CMat = nalgebra::DMatrix<Complex64>;
/// Dense complex vector.
pub type CVec = nalgebra::DVector<Complex64>;

/// Complex scalar shorthand.
pub type C64 = Complex64;
