use std::collections::BTreeMap;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{AnyMatrix, Matrix, Tolerance};
use crate::reduction::SimplexPoint;

use super::{anchor_points, combine_f64, common_dim, report_margins, verify_mmatrix, SearchOutcome, SearchStatus, Tracker};

/// Inputs must be symmetric to this absolute tolerance.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricConfig {
    /// Target optimality gap; also the FEASIBLE/INFEASIBLE threshold.
    pub tol: f64,
    /// Maximum number of cutting-plane rounds.
    pub max_iters: usize,
    /// Tolerance used when re-certifying the final point.
    pub cert_tol: Tolerance,
}

impl Default for SymmetricConfig {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 500, cert_tol: Tolerance::DEFAULT }
    }
}

fn min_eigenpair(m: &Matrix<f64>) -> (f64, Vec<f64>) {
    let n = m.dim();
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, m.as_slice()));
    let i = eig.eigenvalues.imin();
    (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect())
}

/// Maximizes `lambda_min(B_pi)` over simplex points whose combination is a
/// Z-matrix, by Kelley's cutting-plane method. Each evaluated point gives a
/// lower bound; each minimal eigenvector `v` gives the valid cut
/// `t <= sum_i pi_i v^T A_i v`, so the LP value is a certified upper bound.
///
/// A symmetric Z-matrix is a nonsingular M-matrix exactly when it is
/// positive definite, so a lower bound above `tol` yields `FEASIBLE` and an
/// upper bound below `-tol` (or an empty Z-region) yields `INFEASIBLE`.
pub fn search_symmetric(matrices: &[AnyMatrix], cfg: &SymmetricConfig) -> Result<SearchOutcome> {
    let n = common_dim(matrices)?;
    let k = matrices.len();
    let mats: Vec<Matrix<f64>> = matrices.iter().map(AnyMatrix::to_f64).collect();
    if let Some(i) = mats.iter().position(|m| !m.is_symmetric(SYMMETRY_TOL)) {
        return Err(Error::NotSymmetric(i + 1));
    }

    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let pis: Vec<_> = (0..k).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    lp.add_constraint(pis.iter().map(|&p| (p, 1.0)), ComparisonOp::Eq, 1.0);
    for a in 0..n {
        for b in a + 1..n {
            let row: Vec<_> = pis.iter().zip(&mats).map(|(&p, m)| (p, m[(a, b)])).filter(|&(_, c)| c != 0.0).collect();
            if mats.iter().any(|m| m[(a, b)] > 0.0) {
                lp.add_constraint(row, ComparisonOp::Le, 0.0);
            }
        }
    }
    let add_cut = |lp: &mut Problem, v: &[f64]| {
        let mut row: Vec<_> = pis.iter().zip(&mats).map(|(&p, m)| (p, -m.quadratic_form(v).expect("dimension checked"))).collect();
        row.push((t, 1.0));
        lp.add_constraint(row, ComparisonOp::Le, 0.0);
    };
    for a in 0..n {
        let mut e = vec![0.0; n];
        e[a] = 1.0;
        add_cut(&mut lp, &e);
    }

    let mut tracker = Tracker::new(u64::MAX);
    let mut lower = f64::NEG_INFINITY;
    let mut best: Option<SimplexPoint<f64>> = None;
    let mut upper = f64::INFINITY;

    let evaluate = |pi: &SimplexPoint<f64>, lp: &mut Problem, tracker: &mut Tracker, lower: &mut f64, best: &mut Option<SimplexPoint<f64>>| {
        tracker.charge(1);
        let b = combine_f64(&mats, pi.weights());
        let (lambda, v) = min_eigenpair(&b);
        if b.is_z_matrix() && lambda > *lower {
            *lower = lambda;
            *best = Some(pi.clone());
            tracker.record(lambda, pi);
        }
        add_cut(lp, &v);
    };

    for p in anchor_points(k) {
        evaluate(&p, &mut lp, &mut tracker, &mut lower, &mut best);
    }
    for _ in 0..cfg.max_iters {
        let outcome = match lp.solve() {
            Ok(o) => o,
            Err(microlp::Error::Infeasible) => {
                upper = f64::NEG_INFINITY;
                break;
            }
            Err(e) => return Err(crate::error::domain(format!("cutting-plane LP failed: {e}"))),
        };
        let Some(sol) = outcome.solution() else { break };
        upper = upper.min(sol.objective());
        if upper - lower <= cfg.tol || upper < -cfg.tol || lower > cfg.tol {
            break;
        }
        let w: Vec<f64> = pis.iter().map(|&p| sol.var_value(p).max(0.0)).collect();
        let pi = SimplexPoint::project(&w);
        evaluate(&pi, &mut lp, &mut tracker, &mut lower, &mut best);
    }

    let mut margins = BTreeMap::from([("lambda_min_lower".to_string(), lower), ("lambda_min_upper".to_string(), upper)]);
    margins.retain(|_, v| v.is_finite());
    if upper < -cfg.tol {
        return Ok(tracker.finish(SearchStatus::Infeasible, None, margins));
    }
    if lower > cfg.tol {
        let pi = best.expect("a positive lower bound comes with a point");
        let (cert, report) = verify_mmatrix(matrices, &pi, cfg.cert_tol)?;
        if report.is_yes() {
            margins.extend(report_margins(&report));
            return Ok(tracker.finish(SearchStatus::Feasible, Some(cert), margins));
        }
    }
    Ok(tracker.finish(SearchStatus::Unknown, None, margins))
}
