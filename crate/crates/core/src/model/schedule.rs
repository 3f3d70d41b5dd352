//! Braid schedules: ordered move lists compiled into per-site
//! chemical-potential ramps with a delay coefficient `alpha` staggering the
//! onsets along each move's site path.

use super::ModelError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RampProfile {
    /// `(1 - cos(pi tau)) / 2` — C¹ at both ends, the default.
    #[default]
    HalfCosine,
    Linear,
    /// `3 tau² - 2 tau³`.
    Smoothstep,
}

impl RampProfile {
    pub fn eval(&self, tau: f64) -> f64 {
        let tau = tau.clamp(0.0, 1.0);
        match self {
            RampProfile::HalfCosine => 0.5 * (1.0 - (std::f64::consts::PI * tau).cos()),
            RampProfile::Linear => tau,
            RampProfile::Smoothstep => tau * tau * (3.0 - 2.0 * tau),
        }
    }
}

/// One braid move: an ordered site path with target chemical potentials.
/// The order fixes the onset stagger (the moved boundary follows the path).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveSpec {
    pub ramps: Vec<(usize, f64)>,
    /// Optional label carried into diagnostics.
    #[serde(default)]
    pub label: String,
}

impl MoveSpec {
    pub fn new(label: impl Into<String>, ramps: Vec<(usize, f64)>) -> Self {
        MoveSpec {
            ramps,
            label: label.into(),
        }
    }
}

/// A single compiled site ramp.
#[derive(Debug, Clone, Copy)]
pub struct SiteRamp {
    pub site: usize,
    pub onset: f64,
    pub width: f64,
    pub from: f64,
    pub to: f64,
}

/// Compiled braid schedule: piecewise ramps per site, continuous and C¹
/// inside each ramp for the default profile.
#[derive(Debug, Clone)]
pub struct BraidSchedule {
    pub n_sites: usize,
    pub total_time: f64,
    pub alpha: f64,
    pub profile: RampProfile,
    pub initial_mu: Vec<f64>,
    /// All ramps, sorted by onset per site.
    pub ramps: Vec<SiteRamp>,
    /// Move boundary times, including 0 and T.
    pub move_boundaries: Vec<f64>,
    /// Human-readable move labels aligned with the boundary intervals.
    pub move_labels: Vec<String>,
    per_site: Vec<Vec<usize>>,
}

impl BraidSchedule {
    /// Checkpoint times: move boundaries plus T/2 and T, deduplicated.
    pub fn checkpoints(&self) -> Vec<f64> {
        let mut cps = self.move_boundaries.clone();
        cps.push(self.total_time / 2.0);
        cps.push(self.total_time);
        cps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cps.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * self.total_time.max(1.0));
        cps
    }

    /// Per-site chemical potentials at time `t`.
    pub fn mu_at(&self, t: f64) -> Result<Vec<f64>, ModelError> {
        if t < 0.0 || t > self.total_time * (1.0 + 1e-12) {
            return Err(ModelError::TimeOutOfRange {
                t,
                total: self.total_time,
            });
        }
        let mut mu = self.initial_mu.clone();
        for (site, ramp_ids) in self.per_site.iter().enumerate() {
            for &rid in ramp_ids {
                let r = &self.ramps[rid];
                if t < r.onset {
                    break;
                }
                if t >= r.onset + r.width {
                    mu[site] = r.to;
                } else {
                    let tau = (t - r.onset) / r.width;
                    mu[site] = r.from + (r.to - r.from) * self.profile.eval(tau);
                }
            }
        }
        Ok(mu)
    }

    /// A schedule running the same moves in reverse (each move's site order
    /// flipped, targets restored toward the initial layout).
    pub fn frozen(n_sites: usize, mu: Vec<f64>, total_time: f64) -> Self {
        BraidSchedule {
            n_sites,
            total_time,
            alpha: 0.0,
            profile: RampProfile::HalfCosine,
            initial_mu: mu,
            ramps: vec![],
            move_boundaries: vec![0.0, total_time],
            move_labels: vec!["frozen".into()],
            per_site: vec![vec![]; n_sites],
        }
    }
}

/// Compiles a move list into a schedule. Each move gets an equal share
/// `T_m = T / n_moves`; within a move over `s` sites each ramp lasts
/// `w = T_m / (1 + alpha (s-1))` with site `q`'s onset at `q alpha w`
/// relative to the move start, in path order.
pub fn compile_braid(
    n_sites: usize,
    initial_mu: Vec<f64>,
    moves: &[MoveSpec],
    total_time: f64,
    alpha: f64,
    profile: RampProfile,
) -> Result<BraidSchedule, ModelError> {
    if initial_mu.len() != n_sites {
        return Err(ModelError::DimensionMismatch(format!(
            "initial mu has {} entries for {} sites",
            initial_mu.len(),
            n_sites
        )));
    }
    if total_time <= 0.0 {
        return Err(ModelError::InvalidSchedule(
            "total braid time must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ModelError::InvalidSchedule(format!(
            "delay coefficient alpha = {alpha} outside [0, 1]"
        )));
    }
    let n_moves = moves.len().max(1);
    let t_move = total_time / n_moves as f64;

    let mut current = initial_mu.clone();
    let mut ramps = Vec::new();
    let mut per_site: Vec<Vec<usize>> = vec![Vec::new(); n_sites];
    let mut boundaries = vec![0.0];
    let mut labels = Vec::new();

    for (mi, mv) in moves.iter().enumerate() {
        let t0 = mi as f64 * t_move;
        let s = mv.ramps.len();
        if s == 0 {
            return Err(ModelError::InvalidSchedule(format!(
                "move {mi} ({}) has no ramps",
                mv.label
            )));
        }
        let mut touched = vec![false; n_sites];
        let w = t_move / (1.0 + alpha * (s as f64 - 1.0));
        for (q, &(site, target)) in mv.ramps.iter().enumerate() {
            if site >= n_sites {
                return Err(ModelError::InvalidSchedule(format!(
                    "move {mi} ({}) references site {site} of {n_sites}",
                    mv.label
                )));
            }
            if touched[site] {
                return Err(ModelError::InvalidSchedule(format!(
                    "move {mi} ({}) ramps site {site} twice with overlapping windows",
                    mv.label
                )));
            }
            touched[site] = true;
            let onset = t0 + q as f64 * alpha * w;
            ramps.push(SiteRamp {
                site,
                onset,
                width: w,
                from: current[site],
                to: target,
            });
            per_site[site].push(ramps.len() - 1);
            current[site] = target;
        }
        boundaries.push((mi + 1) as f64 * t_move);
        labels.push(if mv.label.is_empty() {
            format!("move{mi}")
        } else {
            mv.label.clone()
        });
    }

    Ok(BraidSchedule {
        n_sites,
        total_time,
        alpha,
        profile,
        initial_mu,
        ramps,
        move_boundaries: boundaries,
        move_labels: labels,
        per_site,
    })
}

/// Reverses a move list: moves in reverse order, each move's path reversed,
/// targets replaying the pre-move values. Used for time-reversal checks.
pub fn reverse_moves(initial_mu: &[f64], moves: &[MoveSpec]) -> Vec<MoveSpec> {
    // track values to recover the pre-move state for each ramp
    let mut current = initial_mu.to_vec();
    let mut history: Vec<Vec<(usize, f64)>> = Vec::with_capacity(moves.len());
    for mv in moves {
        let mut undo = Vec::with_capacity(mv.ramps.len());
        for &(site, target) in &mv.ramps {
            undo.push((site, current[site]));
            current[site] = target;
        }
        history.push(undo);
    }
    let mut out = Vec::with_capacity(moves.len());
    for (mv, undo) in moves.iter().zip(history.iter()).rev() {
        let mut ramps: Vec<(usize, f64)> = undo.clone();
        ramps.reverse();
        out.push(MoveSpec::new(format!("undo {}", mv.label), ramps));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_midpoints() {
        assert!((RampProfile::HalfCosine.eval(0.5) - 0.5).abs() < 1e-15);
        assert!((RampProfile::Smoothstep.eval(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(RampProfile::HalfCosine.eval(0.0), 0.0);
        assert_eq!(RampProfile::HalfCosine.eval(1.0), 1.0);
    }

    fn one_move(s: usize, alpha: f64, t: f64) -> BraidSchedule {
        let ramps: Vec<(usize, f64)> = (0..s).map(|i| (i, 1.0)).collect();
        compile_braid(
            s,
            vec![0.0; s],
            &[MoveSpec::new("m", ramps)],
            t,
            alpha,
            RampProfile::HalfCosine,
        )
        .unwrap()
    }

    #[test]
    fn alpha_zero_is_simultaneous() {
        let s = one_move(5, 0.0, 100.0);
        for r in &s.ramps {
            assert_eq!(r.onset, 0.0);
            assert!((r.width - 100.0).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_one_is_sequential() {
        let s = one_move(5, 1.0, 100.0);
        let w = 100.0 / 5.0;
        for (q, r) in s.ramps.iter().enumerate() {
            assert!((r.onset - q as f64 * w).abs() < 1e-12);
            assert!((r.width - w).abs() < 1e-12);
        }
        // strictly sequential: ramp q ends exactly when q+1 starts
        for q in 0..4 {
            assert!((s.ramps[q].onset + s.ramps[q].width - s.ramps[q + 1].onset).abs() < 1e-9);
        }
    }

    #[test]
    fn stagger_arithmetic_matches_rule() {
        // alpha = 0.025, s = 5, T_m = 480
        let s = one_move(5, 0.025, 480.0);
        let w = 480.0 / 1.1;
        assert!((s.ramps[0].width - w).abs() < 1e-9);
        assert!((s.ramps[1].onset - 0.025 * w).abs() < 1e-9);
        assert!((s.ramps[1].onset - 10.909090909).abs() < 1e-6);
    }

    #[test]
    fn endpoints_and_midpoint_values() {
        let sched = compile_braid(
            2,
            vec![-4.0, -0.05],
            &[MoveSpec::new("a", vec![(0, -0.05)]), MoveSpec::new("b", vec![(1, -4.0)])],
            10.0,
            0.0,
            RampProfile::HalfCosine,
        )
        .unwrap();
        assert_eq!(sched.mu_at(0.0).unwrap(), vec![-4.0, -0.05]);
        assert_eq!(sched.mu_at(10.0).unwrap(), vec![-0.05, -4.0]);
        // site 0 ramps over [0, 5]: midpoint at t = 2.5
        let mid = sched.mu_at(2.5).unwrap();
        assert!((mid[0] - (-4.0 - 0.05) / 2.0).abs() < 1e-12);
        assert!(sched.mu_at(-1.0).is_err());
        assert!(sched.mu_at(11.0).is_err());
    }

    #[test]
    fn continuity_across_moves() {
        let moves = vec![
            MoveSpec::new("up", vec![(0, 1.0), (1, 1.0)]),
            MoveSpec::new("down", vec![(1, 0.0), (0, 0.0)]),
        ];
        let sched = compile_braid(2, vec![0.0, 0.0], &moves, 8.0, 0.5, RampProfile::HalfCosine)
            .unwrap();
        let mut prev = sched.mu_at(0.0).unwrap();
        let steps = 1000;
        for k in 1..=steps {
            let t = 8.0 * k as f64 / steps as f64;
            let mu = sched.mu_at(t).unwrap();
            for i in 0..2 {
                assert!(
                    (mu[i] - prev[i]).abs() < 0.02,
                    "discontinuity at t={t}: {} -> {}",
                    prev[i],
                    mu[i]
                );
            }
            prev = mu;
        }
    }

    #[test]
    fn duplicate_site_in_move_rejected() {
        let err = compile_braid(
            2,
            vec![0.0, 0.0],
            &[MoveSpec::new("bad", vec![(0, 1.0), (0, 2.0)])],
            1.0,
            0.0,
            RampProfile::Linear,
        );
        assert!(err.is_err());
    }

    #[test]
    fn reversal_restores_initial_layout() {
        let initial = vec![0.0, 1.0, 2.0];
        let moves = vec![
            MoveSpec::new("a", vec![(0, 5.0), (1, 6.0)]),
            MoveSpec::new("b", vec![(1, 7.0), (2, 8.0)]),
        ];
        let rev = reverse_moves(&initial, &moves);
        // compile forward then reversed; end of reversed = initial
        let fwd = compile_braid(3, initial.clone(), &moves, 4.0, 0.3, RampProfile::HalfCosine)
            .unwrap();
        let end = fwd.mu_at(4.0).unwrap();
        let back = compile_braid(3, end, &rev, 4.0, 0.3, RampProfile::HalfCosine).unwrap();
        let final_mu = back.mu_at(4.0).unwrap();
        for (a, b) in final_mu.iter().zip(&initial) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn checkpoints_include_boundaries_and_midpoint() {
        let moves = vec![
            MoveSpec::new("a", vec![(0, 1.0)]),
            MoveSpec::new("b", vec![(0, 0.0)]),
            MoveSpec::new("c", vec![(0, 1.0)]),
        ];
        let sched = compile_braid(1, vec![0.0], &moves, 9.0, 0.0, RampProfile::Linear).unwrap();
        let cps = sched.checkpoints();
        for expect in [0.0, 3.0, 4.5, 6.0, 9.0] {
            assert!(cps.iter().any(|&c| (c - expect).abs() < 1e-9), "missing {expect}");
        }
    }
}
