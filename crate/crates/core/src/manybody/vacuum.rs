//! Vacuum representation of a frame: Bloch-Messiah data, normalization and
//! the accumulated phase φ(t) relating the constructed vacuum to the
//! directly time-evolved one.

use super::amplitude::vacuum_overlap;
use super::ManybodyError;
use crate::model::{BdGOperator, BogoliubovFrame};
use crate::skewlin::{bloch_messiah, BlochMessiahForm};
use crate::{C64, CMat};

/// Bloch-Messiah representation of a frame's vacuum with the tracked phase.
#[derive(Debug, Clone)]
pub struct VacuumRep {
    pub bm: BlochMessiahForm,
    /// `N = prod_{k in P} v_k²`.
    pub normalization: f64,
    /// Accumulated phase φ(t); 0 at t = 0 by convention.
    pub phase: f64,
}

/// A frame together with its vacuum representation: everything the amplitude
/// engine needs at one time.
#[derive(Debug, Clone)]
pub struct FrameData {
    pub frame: BogoliubovFrame,
    pub vacuum: VacuumRep,
}

impl FrameData {
    /// Representation at t = 0 (phase zero by convention).
    pub fn initial(frame: BogoliubovFrame, tol_occ: f64) -> Result<Self, ManybodyError> {
        let bm = bloch_messiah(&frame.u, &frame.v, tol_occ)?;
        let normalization = bm.normalization();
        Ok(FrameData {
            frame,
            vacuum: VacuumRep {
                bm,
                normalization,
                phase: 0.0,
            },
        })
    }

    /// Advances the representation to a newly propagated frame.
    ///
    /// The phase obeys the projection of the Schrödinger equation onto the
    /// vacuum: `φ(t+dt) = φ(t) - E₀_mid dt + arg<0̃(t+dt)|0̃(t)>`, where
    /// `E₀_mid` is the vacuum energy at the step midpoint and the overlap is
    /// evaluated by the Pfaffian engine on the phase-free vacua. The rule is
    /// exactly covariant under the Bloch-Messiah gauge freedom.
    pub fn advance(
        prev: &FrameData,
        frame: BogoliubovFrame,
        e0_mid: f64,
        tol_occ: f64,
    ) -> Result<Self, ManybodyError> {
        let dt = frame.time - prev.frame.time;
        let bm = bloch_messiah(&frame.u, &frame.v, tol_occ)?;
        let normalization = bm.normalization();
        let next = FrameData {
            frame,
            vacuum: VacuumRep {
                bm,
                normalization,
                phase: 0.0,
            },
        };
        let overlap = vacuum_overlap(&next, prev)?;
        if overlap.norm() < 0.5 {
            return Err(ManybodyError::PhaseTrackingTooCoarse {
                modulus: overlap.norm(),
            });
        }
        let phase = prev.vacuum.phase - e0_mid * dt + overlap.arg();
        Ok(FrameData {
            vacuum: VacuumRep {
                phase,
                ..next.vacuum
            },
            ..next
        })
    }

    pub fn time(&self) -> f64 {
        self.frame.time
    }

    /// Occupied barred modes in product order: paired members `(k, k̄)` per
    /// block, then the fully occupied modes.
    pub fn occupied_barred_modes(&self) -> Vec<usize> {
        let part = &self.vacuum.bm.partition;
        let mut out = Vec::with_capacity(2 * part.paired.len() + part.occupied.len());
        for &(k, kb) in &part.paired {
            out.push(k);
            out.push(kb);
        }
        out.extend(part.occupied.iter().copied());
        out
    }
}

/// Vacuum energy `E₀ = <0̃| H |0̃>` of the frame's quasiparticle vacuum by
/// Wick contractions: `ρ = V V†`, `κ = U V†`, `κ̄ = V U†`.
pub fn vacuum_energy(op: &BdGOperator, frame: &BogoliubovFrame) -> f64 {
    let v_dag = frame.v.adjoint();
    let rho: CMat = &frame.v * &v_dag;
    let kappa: CMat = &frame.u * &v_dag;
    let kappa_bar: CMat = &frame.v * frame.u.adjoint();
    let n = op.n_sites();

    let mut acc = C64::new(0.0, 0.0);
    let mut tr_h = 0.0;
    for i in 0..n {
        tr_h += op.h[(i, i)].re;
        for j in 0..n {
            acc += op.h[(i, j)] * rho[(i, j)];
            acc += C64::new(0.5, 0.0) * op.delta[(i, j)] * kappa_bar[(i, j)];
            acc += C64::new(0.5, 0.0) * op.delta[(j, i)].conj() * kappa[(i, j)];
        }
    }
    acc -= C64::new(0.5 * tr_h, 0.0);
    debug_assert!(acc.im.abs() < 1e-8 * acc.re.abs().max(1.0));
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{assemble_bdg, build_geometry, diagonalize, GeometrySpec, KitaevParams};
    use crate::skewlin::TOL_OCC;

    fn setup(len: usize, mu: f64) -> (BdGOperator, BogoliubovFrame) {
        let g = build_geometry(GeometrySpec::Chain { len }).unwrap();
        let p = KitaevParams {
            mu_topo: 0.0,
            ..KitaevParams::default()
        };
        let op = assemble_bdg(&g, &p, &vec![mu; len]).unwrap();
        let f = diagonalize(&op, 1e-9, &g, None).unwrap();
        (op, f)
    }

    #[test]
    fn vacuum_energy_is_ground_state_energy() {
        for (len, mu) in [(2usize, 0.0), (4, -0.3), (6, 0.7)] {
            let (op, f) = setup(len, mu);
            let e0 = vacuum_energy(&op, &f);
            let expect: f64 = -0.5 * f.energies.iter().sum::<f64>();
            assert!(
                (e0 - expect).abs() < 1e-10,
                "len {len} mu {mu}: {e0} vs {expect}"
            );
        }
    }

    #[test]
    fn initial_rep_has_zero_phase_and_valid_normalization() {
        let (_, f) = setup(4, -0.3);
        let d = FrameData::initial(f, TOL_OCC).unwrap();
        assert_eq!(d.vacuum.phase, 0.0);
        assert!(d.vacuum.normalization > 0.0 && d.vacuum.normalization <= 1.0);
        let s = vacuum_overlap(&d, &d).unwrap();
        assert!((s - C64::new(1.0, 0.0)).norm() < 1e-10, "self overlap {s}");
    }

    #[test]
    fn occupied_modes_follow_partition_order() {
        let (_, f) = setup(4, 0.0);
        let d = FrameData::initial(f, TOL_OCC).unwrap();
        let occ = d.occupied_barred_modes();
        let part = &d.vacuum.bm.partition;
        assert_eq!(occ.len(), 2 * part.paired.len() + part.occupied.len());
    }
}
