use std::collections::BTreeMap;

use crate::error::Result;
use crate::linalg::{spectral_abscissa, AnyMatrix, Matrix};
use crate::oracle::{random_simplex_point, restart_rng};
use crate::reduction::{convex_combination_any, SimplexPoint};

use super::{anchor_points, combine_f64, common_dim, grid_points, Certificate, SearchConfig, SearchOutcome, SearchStatus, Tracker, FD_STEP, CERTIFICATE_BITS};

const MAX_STEPS_PER_RUN: usize = 200;
const MIN_STEP: f64 = 1e-10;

fn abscissa(mats: &[Matrix<f64>], w: &[f64]) -> Result<f64> {
    spectral_abscissa(&combine_f64(mats, w))
}

/// Recomputes the abscissa from scratch at the (rationalized, when inputs
/// are exact) certificate point.
fn verify(matrices: &[AnyMatrix], pi: &SimplexPoint<f64>) -> Result<(Certificate, f64)> {
    let exact_pi = matrices.iter().all(AnyMatrix::is_exact).then(|| pi.rationalize(CERTIFICATE_BITS));
    let weights = exact_pi.as_ref().map(SimplexPoint::to_f64).unwrap_or_else(|| pi.clone());
    let b = convex_combination_any(matrices, &weights, exact_pi.as_ref())?;
    let a = spectral_abscissa(&b.to_f64())?;
    Ok((Certificate { weights, exact_weights: exact_pi }, a))
}

/// Searches for a Hurwitz-stable convex combination by minimizing the
/// spectral abscissa with finite-difference projected descent from the
/// anchors, the grid (small `k`) and random starts. `FEASIBLE` requires the
/// re-verified abscissa to be below `-tol`; otherwise `UNKNOWN`.
pub fn hurwitz_search(matrices: &[AnyMatrix], cfg: &SearchConfig) -> Result<SearchOutcome> {
    common_dim(matrices)?;
    let k = matrices.len();
    let mats: Vec<Matrix<f64>> = matrices.iter().map(AnyMatrix::to_f64).collect();
    let tol = cfg.tol.value();
    let mut tracker = Tracker::new(cfg.budget);

    let done = |tracker: Tracker, cert: Certificate, a: f64| {
        tracker.finish(SearchStatus::Feasible, Some(cert), BTreeMap::from([("abscissa".to_string(), a)]))
    };

    let mut probes = anchor_points(k);
    if k <= cfg.grid_max_k {
        probes.extend(grid_points(k));
    }
    for p in &probes {
        if !tracker.charge(1) {
            break;
        }
        let a = abscissa(&mats, p.weights())?;
        tracker.record(-a, p);
        if a < -tol {
            let (cert, a) = verify(matrices, p)?;
            if a < -tol {
                return Ok(done(tracker, cert, a));
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
        let mut value = abscissa(&mats, pi.weights())?;
        tracker.record(-value, &pi);
        let mut step = 0.1;
        'run: for _ in 0..MAX_STEPS_PER_RUN {
            if value < -tol {
                break;
            }
            if !tracker.charge(k as u64) {
                break;
            }
            let g = (0..k)
                .map(|i| {
                    let mut shifted = pi.weights().to_vec();
                    shifted[i] += FD_STEP;
                    Ok((abscissa(&mats, &shifted)? - value) / FD_STEP)
                })
                .collect::<Result<Vec<f64>>>()?;
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) {
                break;
            }
            loop {
                if step < MIN_STEP || !tracker.charge(1) {
                    break 'run;
                }
                let moved: Vec<f64> = pi.weights().iter().zip(&g).map(|(p, d)| p - step * d / norm).collect();
                let cand = SimplexPoint::project(&moved);
                let a = abscissa(&mats, cand.weights())?;
                if a < value {
                    (pi, value) = (cand, a);
                    tracker.record(-value, &pi);
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
        }
        if value < -tol {
            let (cert, a) = verify(matrices, &pi)?;
            if a < -tol {
                return Ok(done(tracker, cert, a));
            }
        }
    }

    let best = -tracker.best().0;
    let mut margins = BTreeMap::new();
    if best.is_finite() {
        margins.insert("abscissa".to_string(), best);
    }
    Ok(tracker.finish(SearchStatus::Unknown, None, margins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{build_instance, Graph};

    fn f(rows: &[&[f64]]) -> AnyMatrix {
        AnyMatrix::Float(Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap())
    }

    fn cfg() -> SearchConfig {
        SearchConfig { budget: 2_000, ..SearchConfig::default() }
    }

    #[test]
    fn negated_identity() {
        let out = hurwitz_search(&[f(&[&[-1.0, 0.0], &[0.0, -1.0]])], &cfg()).unwrap();
        assert_eq!(out.status, SearchStatus::Feasible);
        assert!((out.margins["abscissa"] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_marginal() {
        let out = hurwitz_search(&[f(&[&[0.0, 1.0], &[-1.0, 0.0]])], &cfg()).unwrap();
        assert_eq!(out.status, SearchStatus::Unknown);
    }

    #[test]
    fn negated_reduction_instance() {
        let inst = build_instance(&Graph::empty(2).unwrap(), 1).unwrap();
        let neg: Vec<AnyMatrix> = inst.gadgets().iter().map(|g| AnyMatrix::Exact(g.neg())).collect();
        let out = hurwitz_search(&neg, &cfg()).unwrap();
        assert_eq!(out.status, SearchStatus::Feasible);
        assert!(out.certificate.unwrap().exact_weights.is_some());
    }

    #[test]
    fn unstable_family_stays_unknown() {
        let out = hurwitz_search(&[f(&[&[1.0]]), f(&[&[2.0]])], &cfg()).unwrap();
        assert_eq!(out.status, SearchStatus::Unknown);
        assert_eq!(out.budget_spent, 2_000);
    }
}
