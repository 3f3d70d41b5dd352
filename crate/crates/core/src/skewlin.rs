//! Numerical kernels for complex skew-symmetric matrices.
//!
//! Provides the Pfaffian (Parlett-Reid skew elimination with partial
//! pivoting), the Youla canonical form under unitary congruence, the
//! Bloch-Messiah decomposition of a Bogoliubov pair `(U, V)` and canonical
//! unitarity diagnostics. All routines are pure functions of their inputs.

use crate::{C64, CMat};
use thiserror::Error;

/// Element-wise skewness tolerance, relative to `max|A_ij|`.
pub const EPS_SKEW: f64 = 1e-10;
/// Default occupation threshold separating empty/occupied modes from paired ones.
pub const TOL_OCC: f64 = 1e-8;
/// Relative spread below which singular values are treated as one degenerate cluster.
pub const CLUSTER_REL_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SkewlinError {
    #[error("odd-dimensional Pfaffian (dimension {0})")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric: defect {defect:.3e} exceeds {tol:.3e}")]
    NotSkewSymmetric { defect: f64, tol: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Bogoliubov unitarity violated: residuals r1={r1:.3e}, r2={r2:.3e}")]
    UnitarityViolation { r1: f64, r2: f64 },
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
}

/// Largest violation of `A = -A^T`, normalized by `max|A_ij|`.
/// Returns 0 for matrices with all entries below machine floor.
pub fn skew_defect(a: &CMat) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            let d = (a[(i, j)] + a[(j, i)]).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst / scale
}

fn validate_skew(a: &CMat, tol: f64) -> Result<(), SkewlinError> {
    if a.nrows() != a.ncols() {
        return Err(SkewlinError::DimensionMismatch(format!(
            "skew matrix must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = skew_defect(a);
    if defect > tol {
        return Err(SkewlinError::NotSkewSymmetric { defect, tol });
    }
    Ok(())
}

/// Pfaffian of a complex skew-symmetric matrix.
///
/// Parlett-Reid-style elimination: for each even column the entries below the
/// first subdiagonal are zeroed by a unit-triangular congruence (Pfaffian
/// invariant), after partial pivoting on the subdiagonal entry (each row/column
/// swap flips the sign). The Pfaffian is the product of the resulting
/// superdiagonal pivots. `pf([]) = 1` by convention.
pub fn pfaffian(a: &CMat) -> Result<C64, SkewlinError> {
    let m = a.nrows();
    if m % 2 != 0 {
        return Err(SkewlinError::OddDimension(m));
    }
    validate_skew(a, EPS_SKEW)?;
    Ok(pfaffian_unchecked(a.clone()))
}

pub(crate) fn pfaffian_unchecked(mut a: CMat) -> C64 {
    let m = a.nrows();
    if m == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut pf = C64::new(1.0, 0.0);
    for k in (0..m - 1).step_by(2) {
        let mut p = k + 1;
        let mut best = a[(k + 1, k)].norm();
        for j in k + 2..m {
            let v = a[(j, k)].norm();
            if v > best {
                best = v;
                p = j;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k + 1 {
            a.swap_rows(p, k + 1);
            a.swap_columns(p, k + 1);
            pf = -pf;
        }
        let pivot = a[(k + 1, k)];
        for j in k + 2..m {
            let f = a[(j, k)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for l in k..m {
                let t = a[(k + 1, l)] * f;
                a[(j, l)] -= t;
            }
            for l in k..m {
                let t = a[(l, k + 1)] * f;
                a[(l, j)] -= t;
            }
        }
        pf *= a[(k, k + 1)];
    }
    pf
}

/// Youla canonical form of a complex skew-symmetric matrix.
///
/// `q` is unitary with `q^T A q = ⊕_j σ_j [[0,1],[-1,0]] ⊕ 0`, the σ_j sorted
/// descending. `sigmas` has one entry per 2x2 block, `floor(m/2)` in total,
/// zero-padded for the null space.
#[derive(Debug, Clone)]
pub struct Youla {
    pub q: CMat,
    pub sigmas: Vec<f64>,
}

/// Computes the Youla form by greedy deflation: the top singular pair
/// `(σ, u, v)` of the working block yields the congruence plane
/// `(conj(u), v)` (exactly decoupled for skew input), which is split off and
/// the orthogonal complement recursed on.
pub fn youla_canonical(a: &CMat) -> Result<Youla, SkewlinError> {
    validate_skew(a, EPS_SKEW)?;
    let m = a.nrows();
    let mut q = CMat::identity(m, m);
    let mut basis = CMat::identity(m, m); // columns: current working subspace in original coordinates
    let mut b = a.clone();
    let mut sigmas = Vec::with_capacity(m / 2);
    let mut filled = 0usize;
    let scale = a.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let floor = 1e-14 * scale.max(1e-300);

    while b.nrows() >= 2 {
        let dim = b.nrows();
        let svd = crate::linalg::svd_jacobi(&b);
        let sigma = svd.singular_values[0];
        if sigma <= floor {
            break;
        }
        let u0 = svd.u.column(0).into_owned();
        let v0 = svd.v.column(0).into_owned();
        // q1 = conj(u0), q2 = v0 gives q1^T B q2 = sigma, and both rows/cols
        // decouple from the complement by skewness.
        let q1 = u0.map(|z| z.conj());
        let mut q2 = v0.clone_owned();
        // re-orthonormalize against q1 to suppress round-off
        let overlap = q1.dotc(&q2);
        q2 -= &q1 * overlap;
        let n2 = q2.norm();
        if n2 < 1e-8 {
            return Err(SkewlinError::Inconsistency(
                "degenerate singular pair in Youla deflation".into(),
            ));
        }
        q2 /= C64::new(n2, 0.0);

        // record the block in original coordinates
        let col_a = &basis * &q1;
        let col_b = &basis * &q2;
        q.set_column(2 * filled, &col_a);
        q.set_column(2 * filled + 1, &col_b);
        sigmas.push((q1.transpose() * &b * &q2)[(0, 0)].re);
        filled += 1;

        if dim == 2 {
            basis = CMat::zeros(m, 0);
            break;
        }

        // orthonormal complement of span{q1, q2} via projector + QR
        let mut proj = CMat::identity(dim, dim);
        proj -= &q1 * q1.adjoint();
        proj -= &q2 * q2.adjoint();
        // columns of proj span the complement (rank dim-2); orthonormalize
        let qr_q = proj.qr().q();
        // select dim-2 columns with largest projection onto the complement
        let mut w = CMat::zeros(dim, dim - 2);
        let mut taken = 0;
        for c in 0..qr_q.ncols() {
            if taken == dim - 2 {
                break;
            }
            let col = qr_q.column(c).into_owned();
            let mut res = col.clone();
            res -= &q1 * q1.dotc(&col);
            res -= &q2 * q2.dotc(&col);
            let n = res.norm();
            if n > 1e-6 {
                // re-orthogonalize against already-taken columns
                for t in 0..taken {
                    let wcol = w.column(t).into_owned();
                    res -= &wcol * wcol.dotc(&res);
                }
                let n = res.norm();
                if n > 1e-6 {
                    res /= C64::new(n, 0.0);
                    w.set_column(taken, &res);
                    taken += 1;
                }
            }
        }
        if taken != dim - 2 {
            return Err(SkewlinError::Inconsistency(
                "failed to build orthonormal complement in Youla deflation".into(),
            ));
        }
        b = w.transpose() * &b * &w;
        // keep exact skewness in the deflated block
        let bt = b.transpose();
        b = (&b - &bt) * C64::new(0.5, 0.0);
        basis = &basis * &w;
    }

    // null space: remaining basis columns complete q; sigma entries are zero
    for c in 0..basis.ncols() {
        q.set_column(2 * filled + c, &basis.column(c));
    }
    while sigmas.len() < m / 2 {
        sigmas.push(0.0);
    }
    Ok(Youla { q, sigmas })
}

/// Canonical-transformation residuals of a Bogoliubov pair:
/// `r1 = ||U†U + V†V - I||_F`, `r2 = ||U^T V + V^T U||_F`.
pub fn check_unitarity(u: &CMat, v: &CMat) -> (f64, f64) {
    let n = u.ncols();
    let mut g = u.adjoint() * u + v.adjoint() * v;
    for i in 0..n {
        g[(i, i)] -= C64::new(1.0, 0.0);
    }
    let r1 = g.norm();
    let r2 = (u.transpose() * v + v.transpose() * u).norm();
    (r1, r2)
}

/// Index partition of the barred modes: fully empty (`u=1`), paired
/// `(k, k̄)` blocks, fully occupied (`v=1`).
#[derive(Debug, Clone, Default)]
pub struct ModePartition {
    pub empty: Vec<usize>,
    pub paired: Vec<(usize, usize)>,
    pub occupied: Vec<usize>,
}

/// Bloch-Messiah factorization `U = C Ū D†`, `V = C* V̄ D†` with canonical
/// blocks: `Ū = diag(I, ⊕_k u_k σ_0, 0)`, `V̄ = diag(0, ⊕_k v_k iσ_y, I)`,
/// `u_k, v_k > 0`, `u_k² + v_k² = 1`.
#[derive(Debug, Clone)]
pub struct BlochMessiahForm {
    pub c: CMat,
    pub d: CMat,
    /// (u_k, v_k) per paired block, aligned with `partition.paired`.
    pub paired: Vec<(f64, f64)>,
    pub partition: ModePartition,
}

impl BlochMessiahForm {
    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    /// Vacuum normalization `N = Π_{k∈P} v_k²`.
    pub fn normalization(&self) -> f64 {
        self.paired.iter().map(|&(_, v)| v * v).product()
    }

    /// Assembles the canonical `Ū` block matrix.
    pub fn u_bar(&self) -> CMat {
        let n = self.dim();
        let mut ub = CMat::zeros(n, n);
        for &e in &self.partition.empty {
            ub[(e, e)] = C64::new(1.0, 0.0);
        }
        for (&(k, kb), &(u, _)) in self.partition.paired.iter().zip(&self.paired) {
            ub[(k, k)] = C64::new(u, 0.0);
            ub[(kb, kb)] = C64::new(u, 0.0);
        }
        ub
    }

    /// Assembles the canonical `V̄` block matrix (`+v_k` in the upper-right of
    /// each paired block, identity on occupied modes).
    pub fn v_bar(&self) -> CMat {
        let n = self.dim();
        let mut vb = CMat::zeros(n, n);
        for (&(k, kb), &(_, v)) in self.partition.paired.iter().zip(&self.paired) {
            vb[(k, kb)] = C64::new(v, 0.0);
            vb[(kb, k)] = C64::new(-v, 0.0);
        }
        for &o in &self.partition.occupied {
            vb[(o, o)] = C64::new(1.0, 0.0);
        }
        vb
    }

    /// `C Ū D†` — should reproduce the input `U`.
    pub fn reconstruct_u(&self) -> CMat {
        &self.c * self.u_bar() * self.d.adjoint()
    }

    /// `C* V̄ D†` — should reproduce the input `V`.
    pub fn reconstruct_v(&self) -> CMat {
        self.c.map(|z| z.conj()) * self.v_bar() * self.d.adjoint()
    }
}

/// Bloch-Messiah decomposition of a valid Bogoliubov pair.
///
/// The SVD of `U` fixes `C`, `D` and the mode classification; within each
/// degenerate singular cluster the residual block of `C^T V D` is skew and is
/// canonicalized by [`youla_canonical`]; the occupied block is aligned by its
/// SVD. Modes with `u ≥ 1 - tol_occ` are fully empty, `u ≤ tol_occ` fully
/// occupied, the rest paired.
pub fn bloch_messiah(u: &CMat, v: &CMat, tol_occ: f64) -> Result<BlochMessiahForm, SkewlinError> {
    let n = u.nrows();
    if u.ncols() != n || v.nrows() != n || v.ncols() != n {
        return Err(SkewlinError::DimensionMismatch(format!(
            "U, V must be square of equal size, got {}x{} and {}x{}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    let (r1, r2) = check_unitarity(u, v);
    let tol_unit = 1e-8 * (n as f64).sqrt().max(1.0);
    if r1 > tol_unit || r2 > tol_unit {
        return Err(SkewlinError::UnitarityViolation { r1, r2 });
    }

    let svd = crate::linalg::svd_jacobi(u);
    let mut c = svd.u;
    let mut d = svd.v;
    let sv = &svd.singular_values;

    let mut empty = Vec::new();
    let mut occupied = Vec::new();
    let mut middle = Vec::new();
    for i in 0..n {
        let s = sv[i].min(1.0);
        if s >= 1.0 - tol_occ {
            empty.push(i);
        } else if s <= tol_occ {
            occupied.push(i);
        } else {
            middle.push(i);
        }
    }

    let vbar_raw = c.transpose() * v * &d;

    // cluster the paired candidates by relative gaps in the singular values
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &middle {
        match clusters.last_mut() {
            Some(cl) => {
                let last = *cl.last().unwrap();
                let gap = (sv[last] - sv[i]).abs();
                if gap <= CLUSTER_REL_TOL * sv[last].max(sv[i]) {
                    cl.push(i);
                } else {
                    clusters.push(vec![i]);
                }
            }
            None => clusters.push(vec![i]),
        }
    }

    let mut paired_idx = Vec::new();
    let mut paired_uv = Vec::new();
    for cl in &clusters {
        if cl.len() % 2 != 0 {
            return Err(SkewlinError::Inconsistency(format!(
                "odd count of paired-candidate modes ({}) in a degenerate cluster (u ≈ {:.6})",
                cl.len(),
                sv[cl[0]]
            )));
        }
        let size = cl.len();
        let mut block = CMat::zeros(size, size);
        for (a, &ia) in cl.iter().enumerate() {
            for (b, &ib) in cl.iter().enumerate() {
                block[(a, b)] = vbar_raw[(ia, ib)];
            }
        }
        let bt = block.transpose();
        block = (&block - &bt) * C64::new(0.5, 0.0);
        let youla = youla_canonical(&block)?;
        // order blocks so that u = sqrt(1 - v²) descends within the cluster
        let npairs = size / 2;
        let mut g = CMat::zeros(size, size);
        for j in 0..npairs {
            let src = npairs - 1 - j;
            g.set_column(2 * j, &youla.q.column(2 * src));
            g.set_column(2 * j + 1, &youla.q.column(2 * src + 1));
        }
        let sigmas: Vec<f64> = (0..npairs).map(|j| youla.sigmas[npairs - 1 - j]).collect();

        // rotate C and D within the cluster by the same unitary
        let mut c_block = CMat::zeros(n, size);
        let mut d_block = CMat::zeros(n, size);
        for (a, &ia) in cl.iter().enumerate() {
            c_block.set_column(a, &c.column(ia));
            d_block.set_column(a, &d.column(ia));
        }
        let c_new = &c_block * &g;
        let d_new = &d_block * &g;
        for (a, &ia) in cl.iter().enumerate() {
            c.set_column(ia, &c_new.column(a));
            d.set_column(ia, &d_new.column(a));
        }
        for (j, &vk) in sigmas.iter().enumerate() {
            let vk = vk.min(1.0);
            let uk = (1.0 - vk * vk).max(0.0).sqrt();
            paired_idx.push((cl[2 * j], cl[2 * j + 1]));
            paired_uv.push((uk, vk));
        }
    }

    // occupied block: align so that C^T V D restricted is real positive diagonal
    if !occupied.is_empty() {
        let size = occupied.len();
        let mut block = CMat::zeros(size, size);
        for (a, &ia) in occupied.iter().enumerate() {
            for (b, &ib) in occupied.iter().enumerate() {
                block[(a, b)] = vbar_raw[(ia, ib)];
            }
        }
        let svd_o = crate::linalg::svd_jacobi(&block);
        let x = svd_o.u;
        let y = svd_o.v;
        let g1 = x.map(|z| z.conj());
        let mut c_block = CMat::zeros(n, size);
        let mut d_block = CMat::zeros(n, size);
        for (a, &ia) in occupied.iter().enumerate() {
            c_block.set_column(a, &c.column(ia));
            d_block.set_column(a, &d.column(ia));
        }
        let c_new = &c_block * &g1;
        let d_new = &d_block * &y;
        for (a, &ia) in occupied.iter().enumerate() {
            c.set_column(ia, &c_new.column(a));
            d.set_column(ia, &d_new.column(a));
        }
    }

    Ok(BlochMessiahForm {
        c,
        d,
        paired: paired_uv,
        partition: ModePartition {
            empty,
            paired: paired_idx,
            occupied,
        },
    })
}
