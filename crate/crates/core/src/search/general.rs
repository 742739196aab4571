use std::collections::BTreeMap;

use crate::error::Result;
use crate::linalg::{AnyMatrix, Matrix};
use crate::oracle::{random_simplex_point, restart_rng};
use crate::reduction::SimplexPoint;

use super::{anchor_points, combine_f64, common_dim, grid_points, report_margins, verify_mmatrix, SearchConfig, SearchOutcome, SearchStatus, Tracker, FD_STEP};

const MAX_STEPS_PER_RUN: usize = 200;
const MIN_STEP: f64 = 1e-10;

/// Which constraint sets the merit at a point.
enum Active {
    /// Leading minor of this size.
    Minor(usize),
    /// Positive off-diagonal entry `(row, col)`.
    OffDiagonal(usize, usize),
}

struct Merit<'a> {
    mats: &'a [Matrix<f64>],
}

impl Merit<'_> {
    /// Smallest leading principal minor of `B_pi`, further capped by minus
    /// the largest positive off-diagonal entry so that non-Z combinations
    /// never look feasible.
    fn eval(&self, w: &[f64]) -> (f64, Active) {
        let b = combine_f64(self.mats, w);
        let minors = b.leading_principal_minors();
        let (k, min_minor) =
            minors.iter().enumerate().fold((0, f64::INFINITY), |best, (i, &v)| if v < best.1 { (i, v) } else { best });
        let n = b.dim();
        let mut worst = (0.0, 0, 0);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                if b[(i, j)] > worst.0 {
                    worst = (b[(i, j)], i, j);
                }
            }
        }
        if worst.0 > 0.0 && -worst.0 < min_minor {
            (-worst.0, Active::OffDiagonal(worst.1, worst.2))
        } else {
            (min_minor, Active::Minor(k + 1))
        }
    }

    /// Gradient of the active piece. For a minor, `d det(B_k) / d pi_i =
    /// det(B_k) tr(B_k^{-1} (A_i)_k)`; a singular block falls back to
    /// forward differences. Returns the gradient and its evaluation cost.
    fn gradient(&self, w: &[f64], active: &Active) -> (Vec<f64>, u64) {
        match *active {
            Active::OffDiagonal(i, j) => (self.mats.iter().map(|m| -m[(i, j)]).collect(), 0),
            Active::Minor(k) => {
                let block = combine_f64(self.mats, w).leading_block(k);
                let det = block.det();
                match block.inverse().filter(|_| det.abs() > 1e-12) {
                    Some(inv) => {
                        let g = self
                            .mats
                            .iter()
                            .map(|m| {
                                let mut tr = 0.0;
                                for a in 0..k {
                                    for b in 0..k {
                                        tr += inv[(a, b)] * m[(b, a)];
                                    }
                                }
                                det * tr
                            })
                            .collect();
                        (g, 1)
                    }
                    None => {
                        let base = self.eval(w).0;
                        let g = (0..w.len())
                            .map(|i| {
                                let mut shifted = w.to_vec();
                                shifted[i] += FD_STEP;
                                (self.eval(&shifted).0 - base) / FD_STEP
                            })
                            .collect();
                        (g, w.len() as u64 + 1)
                    }
                }
            }
        }
    }
}

/// Heuristic search for a convex combination that is a nonsingular
/// M-matrix. Probes the simplex vertices and barycenter, then (for small
/// `k`) a grid of resolution 1/8, then multi-start projected gradient ascent
/// on the merit. Any point with positive merit is re-certified from scratch
/// before `FEASIBLE` is reported; otherwise the answer is `UNKNOWN`.
pub fn search_general(matrices: &[AnyMatrix], cfg: &SearchConfig) -> Result<SearchOutcome> {
    common_dim(matrices)?;
    let k = matrices.len();
    let mats: Vec<Matrix<f64>> = matrices.iter().map(AnyMatrix::to_f64).collect();
    let merit = Merit { mats: &mats };
    let tol = cfg.tol;
    let mut tracker = Tracker::new(cfg.budget);

    let try_certify = |tracker: &mut Tracker, pi: &SimplexPoint<f64>| -> Result<Option<SearchOutcome>> {
        if !tracker.charge(1) {
            return Ok(None);
        }
        let (cert, report) = verify_mmatrix(matrices, pi, tol)?;
        Ok(report.is_yes().then(|| (cert, report_margins(&report))).map(|(c, m)| {
            std::mem::replace(tracker, Tracker::new(0)).finish(SearchStatus::Feasible, Some(c), m)
        }))
    };

    let mut probes = anchor_points(k);
    if k <= cfg.grid_max_k {
        probes.extend(grid_points(k));
    }
    for p in &probes {
        if !tracker.charge(1) {
            break;
        }
        let (m, _) = merit.eval(p.weights());
        tracker.record(m, p);
        if m > tol.value() {
            if let Some(done) = try_certify(&mut tracker, p)? {
                return Ok(done);
            }
        }
    }

    let mut restart = 1;
    while k > 1 && !tracker.exhausted() {
        let mut pi = random_simplex_point(k, &mut restart_rng(cfg.seed, restart));
        restart += 1;
        if !tracker.charge(1) {
            break;
        }
        let (mut value, mut active) = merit.eval(pi.weights());
        tracker.record(value, &pi);
        let mut step = 0.1;
        let mut last_attempt = f64::NEG_INFINITY;
        'run: for _ in 0..MAX_STEPS_PER_RUN {
            let (g, cost) = merit.gradient(pi.weights(), &active);
            if !tracker.charge(cost) {
                break;
            }
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) {
                break;
            }
            loop {
                if step < MIN_STEP || !tracker.charge(1) {
                    break 'run;
                }
                let moved: Vec<f64> = pi.weights().iter().zip(&g).map(|(p, d)| p + step * d / norm).collect();
                let cand = SimplexPoint::project(&moved);
                let (v, a) = merit.eval(cand.weights());
                if v > value {
                    (pi, value, active) = (cand, v, a);
                    tracker.record(value, &pi);
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if value > tol.value() && value > 2.0 * last_attempt {
                last_attempt = value;
                if let Some(done) = try_certify(&mut tracker, &pi)? {
                    return Ok(done);
                }
            }
        }
        if value > tol.value() && value > last_attempt {
            if let Some(done) = try_certify(&mut tracker, &pi)? {
                return Ok(done);
            }
        }
    }

    let mut margins = BTreeMap::new();
    margins.insert("merit".to_string(), tracker.best().0);
    Ok(tracker.finish(SearchStatus::Unknown, None, margins))
}
