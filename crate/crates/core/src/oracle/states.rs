//! Bogoliubov vacuum construction in the Fock space: the Thouless
//! exponential-pairing form (U invertible) and the Bloch-Messiah product
//! form (always defined), plus quasiparticle creation/annihilation.

use super::fock::{apply_linear, FockVector};
use super::OracleError;
use crate::skewlin::BlochMessiahForm;
use crate::{C64, CMat, CVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiKind {
    Annihilate,
    Create,
}

/// Applies `d_n` or `d_n†` for mode `n` of the frame `(U, V)`:
/// `d_n = sum_i U*_in c_i + V*_in c_i†`, `d_n† = sum_i V_in c_i + U_in c_i†`.
pub fn apply_quasiparticle(
    u: &CMat,
    v: &CMat,
    mode: usize,
    kind: QuasiKind,
    psi: &FockVector,
) -> FockVector {
    let n = u.nrows();
    let mut x = CVec::zeros(n);
    let mut y = CVec::zeros(n);
    match kind {
        QuasiKind::Annihilate => {
            for i in 0..n {
                x[i] = u[(i, mode)].conj();
                y[i] = v[(i, mode)].conj();
            }
        }
        QuasiKind::Create => {
            for i in 0..n {
                x[i] = v[(i, mode)];
                y[i] = u[(i, mode)];
            }
        }
    }
    apply_linear(&x, &y, psi)
}

/// Thouless construction: normalized `exp(1/2 sum_ij Z_ij c_i† c_j†) |0_c>`
/// with `Z = (V U^{-1})*`, antisymmetrized. Errors when U is singular.
pub fn thouless_state(u: &CMat, v: &CMat, cap: usize) -> Result<FockVector, OracleError> {
    let n = u.nrows();
    FockVector::check_cap(n, cap)?;
    let svd = crate::linalg::svd_jacobi(u);
    let smax = svd.singular_values[0];
    let smin = svd.singular_values[svd.singular_values.len() - 1];
    if smin <= 1e-12 * smax.max(1e-300) {
        return Err(OracleError::SingularU {
            cond: smax / smin.max(1e-300),
        });
    }
    let uinv = u
        .clone()
        .lu()
        .try_inverse()
        .ok_or(OracleError::SingularU { cond: f64::INFINITY })?;
    let z_raw = (v * uinv).map(|w| w.conj());
    let zt = z_raw.transpose();
    let z = (&z_raw - &zt) * C64::new(0.5, 0.0);

    // expand the exponential; the pair operator is nilpotent of order <= N/2
    let mut term = FockVector::vacuum(n);
    let mut state = term.clone();
    let max_pairs = n / 2 + 1;
    for k in 1..=max_pairs {
        term = apply_pair_form(&z, &term);
        let fact = (1..=k).fold(1.0, |acc, m| acc * m as f64);
        state.add_assign_scaled(&term, C64::new(1.0 / fact, 0.0));
        if term.norm() / fact < 1e-300 {
            break;
        }
    }
    state.normalize();
    Ok(state)
}

/// Applies `1/2 sum_ij Z_ij c_i† c_j† = sum_{i<j} Z_ij c_i† c_j†` once.
fn apply_pair_form(z: &CMat, psi: &FockVector) -> FockVector {
    let n = psi.n_sites;
    let mut out = FockVector::zero(n);
    let zero = C64::new(0.0, 0.0);
    for b in 0..psi.dim() {
        let amp = psi.amps[b];
        if amp == zero {
            continue;
        }
        for j in 1..n {
            let bj = 1usize << j;
            if b & bj != 0 {
                continue;
            }
            for i in 0..j {
                let bi = 1usize << i;
                if b & bi != 0 || z[(i, j)] == zero {
                    continue;
                }
                // c_i† c_j†: j first
                let s1 = if (b & (bj - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                let mid = b | bj;
                let s2 = if (mid & (bi - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out.amps[mid | bi] += amp * z[(i, j)] * (s1 * s2);
            }
        }
    }
    out
}

/// Bloch-Messiah product construction:
/// `prod_{k in P} (u_k + v_k c̄_k† c̄_k̄†) prod_{k in O} c̄_k† |0_c>`,
/// with the barred operators `c̄_k† = sum_i C_ik c_i†`. The occupied product
/// is applied right-to-left in partition order.
pub fn product_state_vacuum(bm: &BlochMessiahForm, cap: usize) -> Result<FockVector, OracleError> {
    let n = bm.dim();
    FockVector::check_cap(n, cap)?;
    let mut state = FockVector::vacuum(n);
    let zero_x = CVec::zeros(n);

    let barred_create = |k: usize, psi: &FockVector| -> FockVector {
        let mut y = CVec::zeros(n);
        for i in 0..n {
            y[i] = bm.c[(i, k)];
        }
        apply_linear(&zero_x, &y, psi)
    };

    for &k in bm.partition.occupied.iter().rev() {
        state = barred_create(k, &state);
    }
    for (&(k, kb), &(uk, vk)) in bm.partition.paired.iter().zip(&bm.paired).rev() {
        let created = barred_create(k, &barred_create(kb, &state));
        let mut next = state.scaled(C64::new(uk, 0.0));
        next.add_assign_scaled(&created, C64::new(vk, 0.0));
        state = next;
    }
    state.normalize();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{assemble_bdg, build_geometry, diagonalize, GeometrySpec, KitaevParams};
    use crate::oracle::fock_hamiltonian;
    use crate::skewlin::{bloch_messiah, TOL_OCC};

    fn frame_for(mu: &[f64], len: usize) -> (crate::model::BogoliubovFrame, crate::model::BdGOperator) {
        let g = build_geometry(GeometrySpec::Chain { len }).unwrap();
        let p = KitaevParams {
            mu_topo: 0.0,
            ..KitaevParams::default()
        };
        let op = assemble_bdg(&g, &p, mu).unwrap();
        let f = diagonalize(&op, 1e-9, &g, None).unwrap();
        (f, op)
    }

    #[test]
    fn thouless_bare_vacuum_when_v_zero() {
        let n = 3;
        let u = CMat::identity(n, n);
        let v = CMat::zeros(n, n);
        let s = thouless_state(&u, &v, 14).unwrap();
        let vac = FockVector::vacuum(n);
        assert!((s.dot(&vac).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn thouless_annihilated_by_quasiparticles() {
        // mu slightly away from the sweet spot keeps U invertible
        let (f, _) = frame_for(&[-0.3, -0.3, -0.3, -0.3], 4);
        let s = thouless_state(&f.u, &f.v, 14).unwrap();
        for mode in 0..4 {
            let d = apply_quasiparticle(&f.u, &f.v, mode, QuasiKind::Annihilate, &s);
            assert!(d.norm() < 1e-10, "mode {mode}: residual {}", d.norm());
        }
    }

    #[test]
    fn product_state_annihilated_by_quasiparticles() {
        for len in [2usize, 3, 5] {
            let mu = vec![0.0; len];
            let (f, _) = frame_for(&mu, len);
            let bm = bloch_messiah(&f.u, &f.v, TOL_OCC).unwrap();
            let s = product_state_vacuum(&bm, 14).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
            for mode in 0..len {
                let d = apply_quasiparticle(&f.u, &f.v, mode, QuasiKind::Annihilate, &s);
                assert!(d.norm() < 1e-8, "len {len} mode {mode}: {}", d.norm());
            }
        }
    }

    #[test]
    fn product_state_matches_two_site_bell_form() {
        // sweet-spot 2-site ground state: (|00> + |11>)/sqrt(2) up to phase
        let (f, _) = frame_for(&[0.0, 0.0], 2);
        let bm = bloch_messiah(&f.u, &f.v, TOL_OCC).unwrap();
        let s = product_state_vacuum(&bm, 14).unwrap();
        let a00 = s.amps[0b00];
        let a11 = s.amps[0b11];
        assert!((a00.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((a11.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(s.amps[0b01].norm() < 1e-12);
        assert!(s.amps[0b10].norm() < 1e-12);
    }

    #[test]
    fn constructions_agree_up_to_phase() {
        let (f, _) = frame_for(&[-0.4, -0.1, -0.25, -0.4, -0.2], 5);
        let bm = bloch_messiah(&f.u, &f.v, TOL_OCC).unwrap();
        let a = thouless_state(&f.u, &f.v, 14).unwrap();
        let b = product_state_vacuum(&bm, 14).unwrap();
        let overlap = a.dot(&b).norm();
        assert!((overlap - 1.0).abs() < 1e-10, "overlap modulus {overlap}");
    }

    #[test]
    fn vacuum_energy_matches_ground_state_value() {
        let (f, op) = frame_for(&[0.0, 0.0, 0.0, 0.0], 4);
        let bm = bloch_messiah(&f.u, &f.v, TOL_OCC).unwrap();
        let s = product_state_vacuum(&bm, 14).unwrap();
        let h = fock_hamiltonian(&op, 14).unwrap();
        let e = h.expectation(&s).re;
        let expect: f64 = -0.5 * f.energies.iter().sum::<f64>();
        assert!((e - expect).abs() < 1e-10, "vacuum energy {e} vs {expect}");
    }

    #[test]
    fn excited_states_are_orthonormal_eigenstates() {
        let (f, op) = frame_for(&[0.0; 5], 5);
        let bm = bloch_messiah(&f.u, &f.v, TOL_OCC).unwrap();
        let vac = product_state_vacuum(&bm, 14).unwrap();
        let h = fock_hamiltonian(&op, 14).unwrap();
        let e0: f64 = -0.5 * f.energies.iter().sum::<f64>();
        // single excitations
        for mode in 0..5 {
            let s = apply_quasiparticle(&f.u, &f.v, mode, QuasiKind::Create, &vac);
            assert!((s.norm() - 1.0).abs() < 1e-10);
            let hs = h.apply(&s);
            let e = s.dot(&hs).re;
            assert!((e - (e0 + f.energies[mode])).abs() < 1e-9);
            assert!(s.dot(&vac).norm() < 1e-10);
        }
    }
}
