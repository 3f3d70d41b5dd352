//! Dense Fock-space vectors over the occupation-number basis of c-fermions.
//!
//! Bit order: site i corresponds to bit i of the basis index. A creation
//! operator `c_i†` applied to a basis state picks up `(-1)^(number of set
//! bits below i)`; every cross-module comparison depends on this convention.

use super::OracleError;
use crate::{C64, CVec};

/// Default cap on the number of sites (Fock dimension 2^14 = 16384).
pub const DEFAULT_SITE_CAP: usize = 14;

#[derive(Debug, Clone)]
pub struct FockVector {
    pub amps: CVec,
    pub n_sites: usize,
}

impl FockVector {
    pub fn zero(n_sites: usize) -> Self {
        FockVector {
            amps: CVec::zeros(1 << n_sites),
            n_sites,
        }
    }

    /// The bare c-vacuum |0_c>.
    pub fn vacuum(n_sites: usize) -> Self {
        let mut v = Self::zero(n_sites);
        v.amps[0] = C64::new(1.0, 0.0);
        v
    }

    /// A single occupation basis state; bit i of `occ` is site i.
    pub fn basis_state(n_sites: usize, occ: usize) -> Self {
        let mut v = Self::zero(n_sites);
        v.amps[occ] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps /= C64::new(n, 0.0);
        }
    }

    pub fn dot(&self, other: &FockVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn scaled(&self, z: C64) -> FockVector {
        FockVector {
            amps: &self.amps * z,
            n_sites: self.n_sites,
        }
    }

    pub fn conj(&self) -> FockVector {
        FockVector {
            amps: self.amps.map(|z| z.conj()),
            n_sites: self.n_sites,
        }
    }

    pub fn add_assign_scaled(&mut self, other: &FockVector, z: C64) {
        self.amps += &other.amps * z;
    }

    pub fn check_cap(n_sites: usize, cap: usize) -> Result<(), OracleError> {
        if n_sites > cap {
            return Err(OracleError::OverCap { n: n_sites, cap });
        }
        Ok(())
    }
}

#[inline]
fn parity_below(state: usize, site: usize) -> f64 {
    let below = state & ((1usize << site) - 1);
    if below.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `c_i† |psi>`.
pub fn apply_create(site: usize, psi: &FockVector) -> FockVector {
    let mut out = FockVector::zero(psi.n_sites);
    let bit = 1usize << site;
    for b in 0..psi.dim() {
        if b & bit == 0 {
            let amp = psi.amps[b];
            if amp != C64::new(0.0, 0.0) {
                out.amps[b | bit] += amp * parity_below(b, site);
            }
        }
    }
    out
}

/// `c_i |psi>`.
pub fn apply_annihilate(site: usize, psi: &FockVector) -> FockVector {
    let mut out = FockVector::zero(psi.n_sites);
    let bit = 1usize << site;
    for b in 0..psi.dim() {
        if b & bit != 0 {
            let amp = psi.amps[b];
            if amp != C64::new(0.0, 0.0) {
                out.amps[b & !bit] += amp * parity_below(b, site);
            }
        }
    }
    out
}

/// Applies a general one-body operator `sum_i x_i c_i + y_i c_i†`.
pub fn apply_linear(x: &CVec, y: &CVec, psi: &FockVector) -> FockVector {
    let n = psi.n_sites;
    let mut out = FockVector::zero(n);
    let zero = C64::new(0.0, 0.0);
    for b in 0..psi.dim() {
        let amp = psi.amps[b];
        if amp == zero {
            continue;
        }
        for i in 0..n {
            let bit = 1usize << i;
            let sign = parity_below(b, i);
            if b & bit != 0 {
                if x[i] != zero {
                    out.amps[b & !bit] += amp * x[i] * sign;
                }
            } else if y[i] != zero {
                out.amps[b | bit] += amp * y[i] * sign;
            }
        }
    }
    out
}

/// `<a| O_1 O_2 ... O_k |b>` for a string of elementary site operators.
/// `ops` is written in operator order: the last entry acts on `b` first.
pub fn fock_overlap(a: &FockVector, ops: &[(SiteOp, usize)], b: &FockVector) -> C64 {
    let mut state = b.clone();
    for &(kind, site) in ops.iter().rev() {
        state = match kind {
            SiteOp::Create => apply_create(site, &state),
            SiteOp::Annihilate => apply_annihilate(site, &state),
        };
    }
    a.dot(&state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteOp {
    Create,
    Annihilate,
}
