//! Lattice geometries, the time-dependent Kitaev BdG operator, braid-move
//! compilation into per-site chemical-potential schedules, and the initial
//! Bogoliubov frame.

mod bdg;
mod gates;
mod geometry;
mod schedule;

pub use bdg::{assemble_bdg, diagonalize, BdGOperator, BdgBuilder, BogoliubovFrame, KitaevParams};
pub use gates::{cnot_protocol, x_gate_protocol, z_gate_protocol, GateProtocol};
pub use geometry::{build_geometry, Bond, Geometry, GeometrySpec, LegOrientation};
pub use schedule::{compile_braid, reverse_moves, BraidSchedule, MoveSpec, RampProfile, SiteRamp};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("time {t} outside schedule range [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
}
