//! Derived observables: fidelities, joint parities, discrete geometric
//! phases, and the physical-to-logical qubit relabeling.

use super::amplitude::{amplitude, ElementaryOp, StateAt};
use super::ManybodyError;
use crate::C64;
use serde::{Deserialize, Serialize};

/// Complex overlap `<reference| evolved>`; the transition probability is the
/// squared modulus.
pub fn fidelity(reference: StateAt, evolved: StateAt) -> Result<C64, ManybodyError> {
    amplitude(reference, &[], evolved)
}

/// Joint parity `<n(t)| 1 - 2 d_i†(0) d_i(0) |n(t)>` of an original
/// quasiparticle pair, evaluated through mixed-time contractions.
pub fn parity(
    state: StateAt,
    mode: usize,
    initial: &super::FrameData,
) -> Result<f64, ManybodyError> {
    let occ = amplitude(
        state,
        &[
            (ElementaryOp::DDag(mode), initial),
            (ElementaryOp::D(mode), initial),
        ],
        state,
    )?;
    debug_assert!(occ.im.abs() < 1e-6, "parity expectation not real: {occ}");
    Ok(1.0 - 2.0 * occ.re)
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y > std::f64::consts::PI {
        y -= two_pi;
    } else if y <= -std::f64::consts::PI {
        y += two_pi;
    }
    y
}

/// Gauge- and parameterization-invariant geometric phase on a discrete grid:
/// `φ_g(t_k) = arg[ <ψ(0)|ψ(t_k)> · Π_{j<k} <ψ(t_{j+1})|ψ(t_j)> ]`,
/// accumulated as a Bargmann product so the connection integral needs no
/// branch tracking, then unwrapped continuously in `k`.
///
/// `ref_overlaps[k] = <ψ(0)|ψ(t_k)>` and
/// `adjacent[j] = <ψ(t_j)|ψ(t_{j+1})>` (length one less).
pub fn geometric_phase_series(
    ref_overlaps: &[C64],
    adjacent: &[C64],
) -> Result<Vec<f64>, ManybodyError> {
    if ref_overlaps.len() != adjacent.len() + 1 {
        return Err(ManybodyError::DimensionMismatch(format!(
            "got {} reference overlaps and {} adjacent overlaps",
            ref_overlaps.len(),
            adjacent.len()
        )));
    }
    for a in adjacent {
        if a.norm() < 0.5 {
            return Err(ManybodyError::GridTooCoarse { modulus: a.norm() });
        }
    }
    let mut out = Vec::with_capacity(ref_overlaps.len());
    out.push(0.0);
    let mut connection = 0.0; // sum of arg<ψ(t_j)|ψ(t_{j+1})>, each small
    for k in 1..ref_overlaps.len() {
        connection += adjacent[k - 1].arg();
        let principal = ref_overlaps[k].arg() - connection;
        // unwrap against the previous sample
        let prev = out[k - 1];
        let adjusted = prev + wrap_to_pi(principal - prev);
        out.push(adjusted);
    }
    Ok(out)
}

/// Relabeling of physical occupation bitstrings (over the near-zero modes)
/// to logical basis states within one total-parity sector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogicalMap {
    /// `(logical label, physical bits)`, e.g. `("01", [false, true, true])`.
    pub states: Vec<(String, Vec<bool>)>,
}

impl LogicalMap {
    /// The single-qubit sector maps: even `{00 -> 0, 11 -> 1}`, odd
    /// `{10 -> 0, 01 -> 1}`.
    pub fn one_qubit(parity_even: bool) -> LogicalMap {
        let states = if parity_even {
            vec![
                ("0".to_string(), vec![false, false]),
                ("1".to_string(), vec![true, true]),
            ]
        } else {
            vec![
                ("0".to_string(), vec![true, false]),
                ("1".to_string(), vec![false, true]),
            ]
        };
        LogicalMap { states }
    }

    /// Two qubits on three chains in the even sector:
    /// `|xy>_log = |x, y, x xor y>_phys`.
    pub fn two_qubit_even() -> LogicalMap {
        let states = ["00", "01", "10", "11"]
            .iter()
            .map(|lab| {
                let x = lab.as_bytes()[0] == b'1';
                let y = lab.as_bytes()[1] == b'1';
                (lab.to_string(), vec![x, y, x ^ y])
            })
            .collect();
        LogicalMap { states }
    }

    pub fn physical_bits(&self, logical: &str) -> Option<&[bool]> {
        self.states
            .iter()
            .find(|(lab, _)| lab == logical)
            .map(|(_, bits)| bits.as_slice())
    }

    pub fn logical_label(&self, bits: &[bool]) -> Option<&str> {
        self.states
            .iter()
            .find(|(_, b)| b.as_slice() == bits)
            .map(|(lab, _)| lab.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_hamiltonian_geometric_phase_vanishes() {
        // overlaps e^{-iEt} on a uniform grid: dynamical phase cancels
        let e = 0.7;
        let dt = 0.1;
        let n = 50;
        let refs: Vec<C64> = (0..=n)
            .map(|k| C64::from_polar(1.0, -e * dt * k as f64))
            .collect();
        let adj: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, -e * dt)).collect();
        let phases = geometric_phase_series(&refs, &adj).unwrap();
        for p in phases {
            assert!(p.abs() < 1e-12);
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let refs = vec![C64::new(1.0, 0.0), C64::new(0.2, 0.0)];
        let adj = vec![C64::new(0.2, 0.0)];
        assert!(matches!(
            geometric_phase_series(&refs, &adj),
            Err(ManybodyError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn unwrap_handles_accumulation_beyond_pi() {
        // geometric phase steadily growing to 2π must unwrap continuously
        let n = 100;
        let total = 2.0 * std::f64::consts::PI;
        let refs: Vec<C64> = (0..=n)
            .map(|k| C64::from_polar(1.0, total * k as f64 / n as f64))
            .collect();
        let adj: Vec<C64> = (0..n).map(|_| C64::new(1.0, 0.0)).collect();
        let phases = geometric_phase_series(&refs, &adj).unwrap();
        assert!((phases[n] - total).abs() < 1e-9, "end {}", phases[n]);
    }

    #[test]
    fn logical_maps_follow_parity_sectors() {
        let even = LogicalMap::one_qubit(true);
        assert_eq!(even.logical_label(&[false, false]), Some("0"));
        assert_eq!(even.logical_label(&[true, true]), Some("1"));
        let odd = LogicalMap::one_qubit(false);
        assert_eq!(odd.logical_label(&[true, false]), Some("0"));
        assert_eq!(odd.logical_label(&[false, true]), Some("1"));
        let cnot = LogicalMap::two_qubit_even();
        assert_eq!(cnot.physical_bits("01"), Some(&[false, true, true][..]));
        assert_eq!(cnot.physical_bits("11"), Some(&[true, true, false][..]));
    }

    #[test]
    fn wrap_examples() {
        assert!((wrap_to_pi(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!(wrap_to_pi(-std::f64::consts::PI) > 0.0);
        assert!((wrap_to_pi(0.3) - 0.3).abs() < 1e-15);
    }
}
