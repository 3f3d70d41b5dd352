//! Second-quantized BdG Hamiltonian on the Fock space:
//! `H = sum_ij H_ij c_i†c_j - tr(H)/2 + sum_{i<j} (Δ_ij c_i†c_j† + Δ_ij* c_j c_i)`,
//! applied term-by-term so the spectrum matches the quasiparticle form
//! `sum_n E_n (n_n - 1/2)` exactly.

use super::fock::FockVector;
use super::OracleError;
use crate::model::BdGOperator;
use crate::{C64, CVec};

#[derive(Debug, Clone)]
pub struct FockOperator {
    pub n_sites: usize,
    /// off-diagonal hopping terms (i, j, H_ij), i != j
    hop: Vec<(usize, usize, C64)>,
    /// pairing terms (i, j, Δ_ij) with i < j
    pair: Vec<(usize, usize, C64)>,
    /// H_ii (real by hermiticity)
    diag: Vec<f64>,
    /// -tr(H)/2
    constant: f64,
}

/// Lifts a BdG operator to the Fock space, keeping only structurally nonzero
/// terms.
pub fn fock_hamiltonian(op: &BdGOperator, cap: usize) -> Result<FockOperator, OracleError> {
    let n = op.n_sites();
    FockVector::check_cap(n, cap)?;
    let mut hop = Vec::new();
    let mut pair = Vec::new();
    let mut diag = vec![0.0; n];
    let mut tr = 0.0;
    for i in 0..n {
        diag[i] = op.h[(i, i)].re;
        tr += diag[i];
        for j in 0..n {
            if i != j && op.h[(i, j)].norm() > 0.0 {
                hop.push((i, j, op.h[(i, j)]));
            }
            if i < j && op.delta[(i, j)].norm() > 0.0 {
                pair.push((i, j, op.delta[(i, j)]));
            }
        }
    }
    Ok(FockOperator {
        n_sites: n,
        hop,
        pair,
        diag,
        constant: -0.5 * tr,
    })
}

impl FockOperator {
    /// Replaces the diagonal of the normal block (`H_ii = -mu_i` for the
    /// Kitaev model); hopping and pairing terms are time-independent.
    pub fn with_diagonal(&self, h_diag: &[f64]) -> FockOperator {
        let mut out = self.clone();
        out.diag = h_diag.to_vec();
        out.constant = -0.5 * h_diag.iter().sum::<f64>();
        out
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// `H |psi>`.
    pub fn apply(&self, psi: &FockVector) -> FockVector {
        let dim = psi.dim();
        let mut out = FockVector::zero(self.n_sites);
        let zero = C64::new(0.0, 0.0);

        // diagonal: occupied-site sum plus the -tr(H)/2 offset
        for b in 0..dim {
            let amp = psi.amps[b];
            if amp == zero {
                continue;
            }
            let mut e = self.constant;
            let mut bits = b;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                e += self.diag[i];
                bits &= bits - 1;
            }
            out.amps[b] += amp * e;
        }

        // hopping: H_ij c_i† c_j
        for &(i, j, hij) in &self.hop {
            let bi = 1usize << i;
            let bj = 1usize << j;
            for b in 0..dim {
                if b & bj != 0 && b & bi == 0 {
                    let amp = psi.amps[b];
                    if amp == zero {
                        continue;
                    }
                    let s1 = sign_below(b, j);
                    let mid = b & !bj;
                    let s2 = sign_below(mid, i);
                    out.amps[mid | bi] += amp * hij * (s1 * s2);
                }
            }
        }

        // pairing: Δ_ij c_i† c_j† + Δ_ij* c_j c_i (i < j)
        for &(i, j, dij) in &self.pair {
            let bi = 1usize << i;
            let bj = 1usize << j;
            let dconj = dij.conj();
            for b in 0..dim {
                let amp = psi.amps[b];
                if amp == zero {
                    continue;
                }
                if b & bi == 0 && b & bj == 0 {
                    // c_i† c_j†: j first
                    let s1 = sign_below(b, j);
                    let mid = b | bj;
                    let s2 = sign_below(mid, i);
                    out.amps[mid | bi] += amp * dij * (s1 * s2);
                } else if b & bi != 0 && b & bj != 0 {
                    // c_j c_i: i first
                    let s1 = sign_below(b, i);
                    let mid = b & !bi;
                    let s2 = sign_below(mid, j);
                    out.amps[mid & !bj] += amp * dconj * (s1 * s2);
                }
            }
        }
        out
    }

    /// Expectation value `<psi| H |psi>`.
    pub fn expectation(&self, psi: &FockVector) -> C64 {
        psi.dot(&self.apply(psi))
    }

    /// Dense matrix (tests and tiny systems only).
    pub fn dense(&self) -> crate::CMat {
        let dim = self.dim();
        let mut m = crate::CMat::zeros(dim, dim);
        for col in 0..dim {
            let e = FockVector::basis_state(self.n_sites, col);
            let he = self.apply(&e);
            for row in 0..dim {
                m[(row, col)] = he.amps[row];
            }
        }
        m
    }
}

#[inline]
fn sign_below(state: usize, site: usize) -> f64 {
    let below = state & ((1usize << site) - 1);
    if below.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Quasiparticle energies combined in all 2^N occupation patterns:
/// `sum_n E_n (n_n - 1/2)`, sorted ascending. The Fock spectrum must equal
/// this enumeration.
pub fn enumerate_quasiparticle_spectrum(energies: &[f64]) -> Vec<f64> {
    let n = energies.len();
    let e0: f64 = -0.5 * energies.iter().sum::<f64>();
    let mut out = Vec::with_capacity(1 << n);
    for occ in 0..(1usize << n) {
        let mut e = e0;
        for (k, en) in energies.iter().enumerate() {
            if occ & (1 << k) != 0 {
                e += en;
            }
        }
        out.push(e);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[allow(unused_imports)]
use crate::CMat;
