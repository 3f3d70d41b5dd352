//! The time-dependent Kitaev BdG operator and its diagonalization into a
//! Bogoliubov frame with deterministic zero-mode gauge fixing.

use super::geometry::{Geometry, LegOrientation};
use super::ModelError;
use crate::skewlin::check_unitarity;
use crate::{C64, CMat, CVec};
use serde::{Deserialize, Serialize};

/// Kitaev-model parameters. Energies are measured in units of the hopping
/// `t`, times in `hbar/t` (`hbar = 1` internally).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KitaevParams {
    /// Hopping energy t̃.
    pub t: f64,
    /// p-wave pairing magnitude.
    pub delta_p: f64,
    /// Pairing phase on horizontal bonds.
    pub phi_h: f64,
    /// Pairing phase on vertical bonds.
    pub phi_v: f64,
    /// Chemical potential inside the topological window (|mu| < 2t).
    pub mu_topo: f64,
    /// Chemical potential in the trivial regions (|mu| > 2t).
    pub mu_triv: f64,
}

impl Default for KitaevParams {
    fn default() -> Self {
        KitaevParams {
            t: 1.0,
            delta_p: 1.0,
            phi_h: 0.0,
            phi_v: std::f64::consts::FRAC_PI_2,
            mu_topo: -0.05,
            mu_triv: -4.0,
        }
    }
}

impl KitaevParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.mu_topo.abs() >= 2.0 * self.t.abs() {
            return Err(ModelError::InvalidGeometry(format!(
                "mu_topo = {} is outside the topological window |mu| < 2t",
                self.mu_topo
            )));
        }
        if self.mu_triv.abs() <= 2.0 * self.t.abs() {
            return Err(ModelError::InvalidGeometry(format!(
                "mu_triv = {} must lie outside the topological window",
                self.mu_triv
            )));
        }
        Ok(())
    }
}

/// The 2N x 2N single-particle BdG matrix with blocks `[[H, Δ], [-Δ*, -H*]]`
/// in the `(c_1..c_N, c_1†..c_N†)` ordering. `H` is Hermitian, `Δ`
/// skew-symmetric; both are held separately for inspection.
#[derive(Debug, Clone)]
pub struct BdGOperator {
    pub h: CMat,
    pub delta: CMat,
}

impl BdGOperator {
    pub fn n_sites(&self) -> usize {
        self.h.nrows()
    }

    /// Assembles the full 2N x 2N matrix.
    pub fn matrix(&self) -> CMat {
        let n = self.n_sites();
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.h);
        m.view_mut((0, n), (n, n)).copy_from(&self.delta);
        m.view_mut((n, 0), (n, n))
            .copy_from(&self.delta.map(|z| -z.conj()));
        m.view_mut((n, n), (n, n)).copy_from(&self.h.map(|z| -z.conj()));
        m
    }
}

/// Builds the BdG operator for a geometry, parameter set and per-site
/// chemical potential: `H_ii = -mu_i`, `H = -t` on bonds, `Δ = +e^{iφ} Δ_p`
/// from the lower-index to the higher-index site of each directed bond with
/// the orientation-dependent phase (0 horizontal, π/2 vertical by default).
pub fn assemble_bdg(
    g: &Geometry,
    p: &KitaevParams,
    mu: &[f64],
) -> Result<BdGOperator, ModelError> {
    if mu.len() != g.n_sites() {
        return Err(ModelError::DimensionMismatch(format!(
            "mu has {} entries for {} sites",
            mu.len(),
            g.n_sites()
        )));
    }
    let n = g.n_sites();
    let mut h = CMat::zeros(n, n);
    let mut delta = CMat::zeros(n, n);
    for (i, &m) in mu.iter().enumerate() {
        h[(i, i)] = C64::new(-m, 0.0);
    }
    let hop = C64::new(-p.t, 0.0);
    for b in &g.bonds {
        h[(b.from, b.to)] = hop;
        h[(b.to, b.from)] = hop;
        let phi = match b.orientation {
            LegOrientation::Horizontal => p.phi_h,
            LegOrientation::Vertical => p.phi_v,
        };
        let pair = C64::from_polar(p.delta_p.abs(), phi);
        delta[(b.from, b.to)] = pair;
        delta[(b.to, b.from)] = -pair;
    }
    Ok(BdGOperator { h, delta })
}

/// Incremental BdG assembly: the hopping/pairing structure is fixed, only the
/// chemical potential changes along a braid schedule.
#[derive(Debug, Clone)]
pub struct BdgBuilder {
    base: CMat,
    n: usize,
}

impl BdgBuilder {
    pub fn new(g: &Geometry, p: &KitaevParams) -> Result<Self, ModelError> {
        let zero_mu = vec![0.0; g.n_sites()];
        let op = assemble_bdg(g, p, &zero_mu)?;
        Ok(BdgBuilder {
            base: op.matrix(),
            n: g.n_sites(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    /// Full BdG matrix at the given chemical potentials.
    pub fn matrix(&self, mu: &[f64]) -> CMat {
        let mut m = self.base.clone();
        for (i, &mu_i) in mu.iter().enumerate() {
            m[(i, i)] = C64::new(-mu_i, 0.0);
            m[(self.n + i, self.n + i)] = C64::new(mu_i, 0.0);
        }
        m
    }
}

/// A Bogoliubov frame: columns of `(U; V)` are quasiparticle modes. At `t=0`
/// the frame diagonalizes the BdG operator with non-negative energies; under
/// evolution the columns remain the time-evolved quasiparticles.
#[derive(Debug, Clone)]
pub struct BogoliubovFrame {
    pub u: CMat,
    pub v: CMat,
    /// Quasiparticle energies, ascending; meaningful at t = 0 only.
    pub energies: Vec<f64>,
    /// Number of leading near-zero modes (the qubit register).
    pub n_zero: usize,
    pub time: f64,
}

impl BogoliubovFrame {
    pub fn n_sites(&self) -> usize {
        self.u.nrows()
    }

    /// Max of the two canonical-transformation residuals.
    pub fn unitarity_drift(&self) -> f64 {
        let (r1, r2) = check_unitarity(&self.u, &self.v);
        r1.max(r2)
    }

    /// The stacked `2N x N` matrix `(U; V)`.
    pub fn stacked(&self) -> CMat {
        let n = self.n_sites();
        let mut z = CMat::zeros(2 * n, n);
        z.view_mut((0, 0), (n, n)).copy_from(&self.u);
        z.view_mut((n, 0), (n, n)).copy_from(&self.v);
        z
    }

    pub fn from_stacked(z: &CMat, energies: Vec<f64>, n_zero: usize, time: f64) -> Self {
        let n = z.ncols();
        BogoliubovFrame {
            u: z.view((0, 0), (n, n)).into_owned(),
            v: z.view((n, 0), (n, n)).into_owned(),
            energies,
            n_zero,
            time,
        }
    }
}

/// particle-hole conjugate of a BdG vector: `(u; v) -> (v*; u*)`.
fn ph_conjugate(w: &CVec) -> CVec {
    let n2 = w.len();
    let n = n2 / 2;
    let mut out = CVec::zeros(n2);
    for i in 0..n {
        out[i] = w[n + i].conj();
        out[n + i] = w[i].conj();
    }
    out
}

/// Diagonalizes a BdG operator into a frame with `E_n >= 0` sorted ascending.
///
/// Near-zero modes (`E < zero_tol`) are gauge-fixed: the degenerate
/// particle-hole-closed subspace is rotated into self-conjugate (Majorana)
/// vectors, localized by diagonalizing the projected position operator, and
/// recombined pairwise into quasiparticles `d = (γ + iγ')/√2` whose Majorana
/// components sit at opposite ends of their host segment. `segments`, when
/// given, lists the initially-topological site groups used to assign zero
/// modes to chains (one mode per segment, ordered by segment).
pub fn diagonalize(
    op: &BdGOperator,
    zero_tol: f64,
    g: &Geometry,
    segments: Option<&[Vec<usize>]>,
) -> Result<BogoliubovFrame, ModelError> {
    let n = op.n_sites();
    let m = op.matrix();
    let se = crate::linalg::hermitian_eigen(&m);

    // non-negative half, ascending
    let mut u = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    let mut energies = Vec::with_capacity(n);
    for (col, i) in (n..2 * n).enumerate() {
        let w = se.eigenvectors.column(i);
        for r in 0..n {
            u[(r, col)] = w[r];
            v[(r, col)] = w[n + r];
        }
        energies.push(se.eigenvalues[i]);
    }

    let n_zero = energies.iter().take_while(|&&e| e < zero_tol).count();
    if n_zero > 0 {
        // the particle-hole-closed near-zero space, pooled from both spectrum
        // halves (at exact degeneracy the solver may return vectors that are
        // self-conjugate up to phase)
        let pool: Vec<CVec> = (0..2 * n)
            .filter(|&i| se.eigenvalues[i].abs() < zero_tol)
            .map(|i| {
                let w = se.eigenvectors.column(i);
                CVec::from_fn(2 * n, |r, _| w[r])
            })
            .collect();
        if pool.len() != 2 * n_zero {
            return Err(ModelError::Eigensolver(format!(
                "near-zero space has dimension {}, expected {}",
                pool.len(),
                2 * n_zero
            )));
        }
        gauge_fix_zero_modes(&mut u, &mut v, &pool, n_zero, g, segments)?;
        for e in energies.iter_mut().take(n_zero) {
            *e = e.abs();
        }
    }
    Ok(BogoliubovFrame {
        u,
        v,
        energies,
        n_zero,
        time: 0.0,
    })
}

fn column(u: &CMat, v: &CMat, c: usize) -> CVec {
    let n = u.nrows();
    let mut w = CVec::zeros(2 * n);
    for r in 0..n {
        w[r] = u[(r, c)];
        w[n + r] = v[(r, c)];
    }
    w
}

fn site_weight(w: &CVec, i: usize, n: usize) -> f64 {
    w[i].norm_sqr() + w[n + i].norm_sqr()
}

fn gauge_fix_zero_modes(
    u: &mut CMat,
    v: &mut CMat,
    pool: &[CVec],
    q: usize,
    g: &Geometry,
    segments: Option<&[Vec<usize>]>,
) -> Result<(), ModelError> {
    let n = u.nrows();
    // Majorana basis of the particle-hole-closed 2q-dimensional space:
    // self-conjugate combinations of the pooled vectors, Gram-Schmidt
    // orthogonalized (twice, against round-off)
    let mut majoranas: Vec<CVec> = Vec::with_capacity(2 * q);
    for w in pool {
        let wc = ph_conjugate(w);
        for cand in [w + &wc, (&wc - w) * C64::new(0.0, 1.0)] {
            if majoranas.len() == 2 * q {
                break;
            }
            let mut m = cand;
            for _ in 0..2 {
                for prev in &majoranas {
                    let overlap = prev.dotc(&m);
                    m -= prev * overlap;
                }
            }
            let nrm = m.norm();
            if nrm > 1e-6 {
                m /= C64::new(nrm, 0.0);
                majoranas.push(m);
            }
        }
    }
    if majoranas.len() != 2 * q {
        return Err(ModelError::Eigensolver(format!(
            "could not build a Majorana basis: got {} of {} vectors",
            majoranas.len(),
            2 * q
        )));
    }

    // localize: diagonalize the projected position operator (x + golden*y to
    // break ties between sites sharing an x coordinate)
    let golden = 0.618_033_988_749_894_9;
    let pos: Vec<f64> = (0..n)
        .map(|i| {
            let (x, y) = g.coord(i);
            x as f64 + golden * y as f64
        })
        .collect();
    let mut xmat = nalgebra::DMatrix::<f64>::zeros(2 * q, 2 * q);
    for a in 0..2 * q {
        for b in a..2 * q {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..n {
                s += (majoranas[a][i].conj() * majoranas[b][i]
                    + majoranas[a][n + i].conj() * majoranas[b][n + i])
                    * C64::new(pos[i], 0.0);
            }
            xmat[(a, b)] = s.re;
            xmat[(b, a)] = s.re;
        }
    }
    let (_, xvecs) = crate::linalg::symmetric_eigen(&xmat);

    let mut localized: Vec<CVec> = Vec::with_capacity(2 * q);
    for k in 0..2 * q {
        let mut m = CVec::zeros(2 * n);
        for a in 0..2 * q {
            m += &majoranas[a] * C64::new(xvecs[(a, k)], 0.0);
        }
        // sign gauge: largest particle-component entry rotated into the right
        // half of the complex plane
        let mut best = 0usize;
        let mut bestv = 0.0;
        for i in 0..n {
            let w = m[i].norm();
            if w > bestv {
                bestv = w;
                best = i;
            }
        }
        let a = m[best];
        if a.re < 0.0 || (a.re == 0.0 && a.im < 0.0) {
            m = -m;
        }
        localized.push(m);
    }

    // assign each localized Majorana to a host segment; without segments,
    // pair consecutively by localization center
    let by_segment: Vec<Vec<usize>> = if let Some(segs) = segments {
        let seg_of_site = |site: usize| -> usize {
            for (k, s) in segs.iter().enumerate() {
                if s.contains(&site) {
                    return k;
                }
            }
            // fall back to the nearest segment by coordinate distance
            let (x0, y0) = g.coord(site);
            let mut best = 0;
            let mut bestd = f64::INFINITY;
            for (k, s) in segs.iter().enumerate() {
                for &j in s {
                    let (x, y) = g.coord(j);
                    let d = ((x - x0) as f64).powi(2) + ((y - y0) as f64).powi(2);
                    if d < bestd {
                        bestd = d;
                        best = k;
                    }
                }
            }
            best
        };
        let mut by_seg: Vec<Vec<usize>> = vec![Vec::new(); segs.len()];
        for (li, m) in localized.iter().enumerate() {
            let mut best = 0usize;
            let mut bestv = 0.0;
            for i in 0..n {
                let w = site_weight(m, i, n);
                if w > bestv {
                    bestv = w;
                    best = i;
                }
            }
            by_seg[seg_of_site(best)].push(li);
        }
        for (k, members) in by_seg.iter().enumerate() {
            if members.len() != 2 {
                return Err(ModelError::Eigensolver(format!(
                    "segment {k} hosts {} near-zero Majorana modes, expected 2; \
                     zero_tol or the initial layout is inconsistent",
                    members.len()
                )));
            }
        }
        by_seg
    } else {
        // localized list is already ordered by center
        (0..q).map(|k| vec![2 * k, 2 * k + 1]).collect()
    };

    // one quasiparticle per segment: d = (γ_left + i γ_right)/√2
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for (k, members) in by_segment.iter().enumerate() {
        let (a, b) = (members[0], members[1]);
        // order by localization center along the ordering coordinate
        let center = |m: &CVec| -> f64 {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..n {
                let w = site_weight(m, i, n);
                num += pos[i] * w;
                den += w;
            }
            num / den
        };
        let (left, right) = if center(&localized[a]) <= center(&localized[b]) {
            (a, b)
        } else {
            (b, a)
        };
        let d = (&localized[left] + &localized[right] * C64::new(0.0, 1.0)) * inv_sqrt2;
        for r in 0..n {
            u[(r, k)] = d[r];
            v[(r, k)] = d[n + r];
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::geometry::{build_geometry, GeometrySpec};

    fn sweet_spot() -> KitaevParams {
        KitaevParams {
            t: 1.0,
            delta_p: 1.0,
            phi_h: 0.0,
            phi_v: std::f64::consts::FRAC_PI_2,
            mu_topo: 0.0,
            mu_triv: -4.0,
        }
    }

    #[test]
    fn chain2_matrices_match_model_formula() {
        let g = build_geometry(GeometrySpec::Chain { len: 2 }).unwrap();
        let p = sweet_spot();
        let op = assemble_bdg(&g, &p, &[0.0, 0.0]).unwrap();
        let e = 1e-15;
        assert!((op.h[(0, 0)].norm()) < e && (op.h[(1, 1)].norm()) < e);
        assert!((op.h[(0, 1)] - C64::new(-1.0, 0.0)).norm() < e);
        assert!((op.h[(1, 0)] - C64::new(-1.0, 0.0)).norm() < e);
        assert!((op.delta[(0, 1)] - C64::new(1.0, 0.0)).norm() < e);
        assert!((op.delta[(1, 0)] - C64::new(-1.0, 0.0)).norm() < e);
    }

    #[test]
    fn negative_mu_flips_diagonal_sign() {
        let g = build_geometry(GeometrySpec::Chain { len: 2 }).unwrap();
        let p = sweet_spot();
        let op = assemble_bdg(&g, &p, &[-4.0, -4.0]).unwrap();
        assert!((op.h[(0, 0)] - C64::new(4.0, 0.0)).norm() < 1e-15);
        assert!((op.h[(1, 1)] - C64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vertical_bonds_carry_imaginary_pairing() {
        let g = build_geometry(GeometrySpec::TJunction { leg_len: 2 }).unwrap();
        let p = sweet_spot();
        let op = assemble_bdg(&g, &p, &vec![0.0; g.n_sites()]).unwrap();
        let top = g.stems[0][0];
        let junction = g.junctions[0];
        // directed stem-top -> junction bond: Δ[from][to] = e^{iπ/2} = i
        assert!((op.delta[(top, junction)] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((op.delta[(junction, top)] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn bdg_blocks_satisfy_symmetries_exactly() {
        let g = build_geometry(GeometrySpec::TJunction { leg_len: 3 }).unwrap();
        let p = KitaevParams::default();
        let mu: Vec<f64> = (0..g.n_sites()).map(|i| -0.1 * i as f64).collect();
        let op = assemble_bdg(&g, &p, &mu).unwrap();
        assert_eq!((&op.h - op.h.adjoint()).norm(), 0.0);
        assert_eq!((&op.delta + op.delta.transpose()).norm(), 0.0);
    }

    #[test]
    fn sweet_spot_chain_spectrum() {
        let g = build_geometry(GeometrySpec::Chain { len: 6 }).unwrap();
        let p = sweet_spot();
        let op = assemble_bdg(&g, &p, &vec![0.0; 6]).unwrap();
        let f = diagonalize(&op, 1e-6, &g, None).unwrap();
        assert_eq!(f.n_zero, 1);
        assert!(f.energies[0].abs() < 1e-12);
        for e in &f.energies[1..] {
            assert!((e - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_chain_is_gapped() {
        let g = build_geometry(GeometrySpec::Chain { len: 2 }).unwrap();
        let p = sweet_spot();
        let op = assemble_bdg(&g, &p, &[-4.0, -4.0]).unwrap();
        let f = diagonalize(&op, 1e-6, &g, None).unwrap();
        assert_eq!(f.n_zero, 0);
        assert!(f.energies[0] > 1.0);
    }

    #[test]
    fn frame_reconstructs_bdg_matrix() {
        let g = build_geometry(GeometrySpec::TJunction { leg_len: 3 }).unwrap();
        let p = KitaevParams::default();
        // rail topological, stem trivial: one zero mode
        let mu: Vec<f64> = (0..g.n_sites())
            .map(|i| if i < g.rail_len { -0.05 } else { -4.0 })
            .collect();
        let op = assemble_bdg(&g, &p, &mu).unwrap();
        let f = diagonalize(&op, 1e-6, &g, None).unwrap();
        let n = g.n_sites();
        // W = [[U, V*], [V, U*]], W† M W = diag(E, -E)
        let mut w = CMat::zeros(2 * n, 2 * n);
        w.view_mut((0, 0), (n, n)).copy_from(&f.u);
        w.view_mut((0, n), (n, n)).copy_from(&f.v.map(|z| z.conj()));
        w.view_mut((n, 0), (n, n)).copy_from(&f.v);
        w.view_mut((n, n), (n, n)).copy_from(&f.u.map(|z| z.conj()));
        let m = op.matrix();
        let rot = w.adjoint() * &m * &w;
        let mut target = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            target[(i, i)] = C64::new(f.energies[i], 0.0);
            target[(n + i, n + i)] = C64::new(-f.energies[i], 0.0);
        }
        let resid = (rot - target).norm() / m.norm();
        assert!(resid < 1e-10, "frame reconstruction residual {resid:.3e}");
        let (r1, r2) = check_unitarity(&f.u, &f.v);
        assert!(r1 < 1e-12 && r2 < 1e-12);
    }

    #[test]
    fn sweet_spot_majoranas_localize_at_chain_ends() {
        let n = 8;
        let g = build_geometry(GeometrySpec::Chain { len: n }).unwrap();
        let p = sweet_spot();
        let op = assemble_bdg(&g, &p, &vec![0.0; n]).unwrap();
        let segments = vec![(0..n).collect::<Vec<_>>()];
        let f = diagonalize(&op, 1e-6, &g, Some(&segments)).unwrap();
        assert_eq!(f.n_zero, 1);
        // d = (γ_1 + i γ_2N)/√2: γ components recovered from the zero column
        let w = column(&f.u, &f.v, 0);
        let wc = ph_conjugate(&w);
        let m_left = (&w + &wc) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let m_right = (&wc - &w) * C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        let weight = |m: &CVec, i: usize| site_weight(m, i, n);
        assert!(weight(&m_left, 0) > 1.0 - 1e-10, "left Majorana weight {}", weight(&m_left, 0));
        assert!(weight(&m_right, n - 1) > 1.0 - 1e-10);
    }
}
