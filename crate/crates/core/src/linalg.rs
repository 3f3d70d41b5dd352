//! Dense Hermitian eigensolver.
//!
//! Cyclic Jacobi rotations on complex Hermitian matrices. Chosen over the
//! general-purpose QR route because BdG spectra are full of exactly and
//! nearly degenerate clusters (particle-hole pairs, zero modes), where Jacobi
//! keeps both the eigenbasis orthonormality and the reconstruction residual
//! at round-off level.

use crate::{C64, CMat};

/// Eigendecomposition `A = V diag(λ) V†` of a Hermitian matrix, eigenvalues
/// ascending. The strictly-lower triangle of the input is ignored (the upper
/// triangle and real diagonal define the matrix).
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

pub fn hermitian_eigen(a: &CMat) -> HermitianEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen needs a square matrix");
    let mut m = a.clone();
    // enforce exact hermiticity from the upper triangle
    for p in 0..n {
        m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
        for q in p + 1..n {
            m[(q, p)] = m[(p, q)].conj();
        }
    }
    let mut v = CMat::identity(n, n);
    let scale: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return HermitianEigen {
            eigenvalues: vec![0.0; n],
            eigenvectors: v,
        };
    }
    let tol = 1e-15 * scale;
    let max_sweeps = 60;

    for _sweep in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / C64::new(b, 0.0);
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let spe = phase * s; // s e^{i φ}

                // A <- J† A J with J = [[c, s e^{iφ}], [-s e^{-iφ}, c]] on (p, q)
                for r in 0..n {
                    let arp = m[(r, p)];
                    let arq = m[(r, q)];
                    m[(r, p)] = arp * c - arq * spe.conj();
                    m[(r, q)] = arq * c + arp * spe;
                }
                for r in 0..n {
                    let apr = m[(p, r)];
                    let aqr = m[(q, r)];
                    m[(p, r)] = apr * c - aqr * spe;
                    m[(q, r)] = aqr * c + apr * spe.conj();
                }
                // clean the rotated pair
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c - vrq * spe.conj();
                    v[(r, q)] = vrq * c + vrp * spe;
                }
            }
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| {
        m[(i, i)]
            .re
            .partial_cmp(&m[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| m[(i, i)].re).collect();
    let mut sorted = CMat::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        sorted.set_column(col, &v.column(i));
    }
    HermitianEigen {
        eigenvalues,
        eigenvectors: sorted,
    }
}

/// Singular value decomposition `A = U diag(σ) V†`, σ descending.
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

/// One-sided (Hestenes) Jacobi SVD: unitary column rotations drive the Gram
/// matrix diagonal. Preferred here over bidiagonalization because Bogoliubov
/// blocks carry exactly degenerate singular-value pairs, where one-sided
/// Jacobi retains full accuracy.
pub fn svd_jacobi(a: &CMat) -> Svd {
    let nr = a.nrows();
    let nc = a.ncols();
    let mut b = a.clone();
    let mut v = CMat::identity(nc, nc);
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Svd {
            u: orthonormal_completion(&CMat::zeros(nr, 0), nr),
            singular_values: vec![0.0; nc.min(nr)],
            v,
        };
    }
    let tol = 1e-15;
    let max_sweeps = 60;
    for _sweep in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..nc {
            for q in p + 1..nc {
                let bp = b.column(p);
                let bq = b.column(q);
                let gpp = bp.norm_squared();
                let gqq = bq.norm_squared();
                let gpq = bp.dotc(&bq);
                let off = gpq.norm();
                if off <= tol * (gpp * gqq).sqrt().max(1e-300 * scale * scale) {
                    continue;
                }
                rotated = true;
                let phase = gpq / C64::new(off, 0.0);
                let tau = (gqq - gpp) / (2.0 * off);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let spe = phase * s;
                for r in 0..nr {
                    let brp = b[(r, p)];
                    let brq = b[(r, q)];
                    b[(r, p)] = brp * c - brq * spe.conj();
                    b[(r, q)] = brq * c + brp * spe;
                }
                for r in 0..nc {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c - vrq * spe.conj();
                    v[(r, q)] = vrq * c + vrp * spe;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigmas: Vec<f64> = (0..nc).map(|j| b.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut bs = CMat::zeros(nr, nc);
    let mut vs = CMat::zeros(nc, nc);
    for (col, &i) in order.iter().enumerate() {
        bs.set_column(col, &b.column(i));
        vs.set_column(col, &v.column(i));
    }
    sigmas = order.iter().map(|&i| sigmas[i]).collect();

    // left vectors: normalized columns, completed on the null space
    let floor = 1e-14 * sigmas.first().copied().unwrap_or(0.0).max(1e-300);
    let mut rank = 0;
    let mut u = CMat::zeros(nr, nc.min(nr));
    for j in 0..nc.min(nr) {
        if sigmas[j] > floor {
            let col = bs.column(j) / C64::new(sigmas[j], 0.0);
            u.set_column(j, &col);
            rank = j + 1;
        }
    }
    if rank < nc.min(nr) {
        let partial = u.columns(0, rank).into_owned();
        let completed = orthonormal_completion(&partial, nr);
        for j in rank..nc.min(nr) {
            u.set_column(j, &completed.column(j));
        }
    }
    Svd {
        u,
        singular_values: sigmas.into_iter().take(nc.min(nr)).collect(),
        v: vs,
    }
}

/// Extends `partial` (orthonormal columns) to `n` orthonormal columns by
/// Gram-Schmidt over the identity basis.
fn orthonormal_completion(partial: &CMat, n: usize) -> CMat {
    let k = partial.ncols();
    let mut out = CMat::zeros(n, n);
    for j in 0..k {
        out.set_column(j, &partial.column(j));
    }
    let mut filled = k;
    for cand in 0..n {
        if filled == n {
            break;
        }
        let mut w = crate::CVec::zeros(n);
        w[cand] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..filled {
                let col = out.column(j);
                let overlap = col.dotc(&w);
                w -= col * overlap;
            }
        }
        let nrm = w.norm();
        if nrm > 1e-8 {
            w /= C64::new(nrm, 0.0);
            out.set_column(filled, &w);
            filled += 1;
        }
    }
    out
}

/// Real-symmetric convenience wrapper.
pub fn symmetric_eigen(a: &nalgebra::DMatrix<f64>) -> (Vec<f64>, nalgebra::DMatrix<f64>) {
    let ac = CMat::from_fn(a.nrows(), a.ncols(), |i, j| C64::new(a[(i, j)], 0.0));
    let he = hermitian_eigen(&ac);
    let vr = nalgebra::DMatrix::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| {
        he.eigenvectors[(i, j)].re
    });
    (he.eigenvalues, vr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reconstruction_residual(a: &CMat, e: &HermitianEigen) -> f64 {
        let n = a.nrows();
        let mut lam = CMat::zeros(n, n);
        for i in 0..n {
            lam[(i, i)] = C64::new(e.eigenvalues[i], 0.0);
        }
        let rec = &e.eigenvectors * lam * e.eigenvectors.adjoint();
        (a - rec).norm() / a.norm().max(1e-300)
    }

    #[test]
    fn random_hermitian_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3usize, 8, 17, 40] {
            let b = CMat::from_fn(n, n, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let a = (&b + b.adjoint()) * C64::new(0.5, 0.0);
            let e = hermitian_eigen(&a);
            assert!(reconstruction_residual(&a, &e) < 1e-13);
            let orth = (e.eigenvectors.adjoint() * &e.eigenvectors - CMat::identity(n, n)).norm();
            assert!(orth < 1e-13);
            for w in e.eigenvalues.windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_cluster_accuracy() {
        // spectrum with exact pairs and near-zero values, conjugated by a
        // random unitary: the regime where clustered solvers lose accuracy
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 12;
        let evals = [
            -2.05, -2.05 + 1e-9, -2.0, -2.0, -1.9, -1e-12, 1e-12, 1.9, 2.0, 2.0, 2.05 - 1e-9, 2.05,
        ];
        let b = CMat::from_fn(n, n, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let q = b.qr().q();
        let mut lam = CMat::zeros(n, n);
        for i in 0..n {
            lam[(i, i)] = C64::new(evals[i], 0.0);
        }
        let a = &q * lam * q.adjoint();
        let a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let e = hermitian_eigen(&a);
        assert!(
            reconstruction_residual(&a, &e) < 1e-13,
            "residual {}",
            reconstruction_residual(&a, &e)
        );
        for (got, want) in e.eigenvalues.iter().zip(evals.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix() {
        let a = CMat::zeros(4, 4);
        let e = hermitian_eigen(&a);
        assert_eq!(e.eigenvalues, vec![0.0; 4]);
    }

    fn svd_residual(a: &CMat, s: &Svd) -> f64 {
        let n = a.ncols();
        let mut sig = CMat::zeros(s.u.ncols(), n);
        for (i, &x) in s.singular_values.iter().enumerate() {
            sig[(i, i)] = C64::new(x, 0.0);
        }
        (&s.u * sig * s.v.adjoint() - a).norm() / a.norm().max(1e-300)
    }

    #[test]
    fn svd_random_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for n in [2usize, 5, 12] {
            let a = CMat::from_fn(n, n, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let s = svd_jacobi(&a);
            assert!(svd_residual(&a, &s) < 1e-13);
            let orth_u = (s.u.adjoint() * &s.u - CMat::identity(n, n)).norm();
            let orth_v = (s.v.adjoint() * &s.v - CMat::identity(n, n)).norm();
            assert!(orth_u < 1e-13 && orth_v < 1e-13);
            for w in s.singular_values.windows(2) {
                assert!(w[0] >= w[1] - 1e-14);
            }
        }
    }

    #[test]
    fn svd_degenerate_and_singular_spectrum() {
        // doubly degenerate singular values plus exact zeros and ones:
        // the Bogoliubov-block structure
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 8;
        let sv = [1.0, 0.93, 0.93, 0.4, 0.4, 1e-9, 0.0, 0.0];
        let b1 = CMat::from_fn(n, n, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let b2 = CMat::from_fn(n, n, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let q1 = b1.qr().q();
        let q2 = b2.qr().q();
        let mut sig = CMat::zeros(n, n);
        for i in 0..n {
            sig[(i, i)] = C64::new(sv[i], 0.0);
        }
        let a = &q1 * sig * q2.adjoint();
        let s = svd_jacobi(&a);
        assert!(svd_residual(&a, &s) < 1e-13, "residual {}", svd_residual(&a, &s));
        for (got, want) in s.singular_values.iter().zip(sv.iter()) {
            assert!((got - want).abs() < 1e-13, "sigma {got} vs {want}");
        }
        // U must be orthonormal including the completed null-space columns
        let orth_u = (s.u.adjoint() * &s.u - CMat::identity(n, n)).norm();
        assert!(orth_u < 1e-12);
    }
}
