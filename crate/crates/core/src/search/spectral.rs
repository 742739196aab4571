use serde::Serialize;

use crate::cert::{certify, Consensus};
use crate::error::{domain, Result};
use crate::linalg::{eigenvalues, AnyMatrix, Matrix};
use crate::oracle::{random_simplex_point, restart_rng};
use crate::reduction::SimplexPoint;

use super::{anchor_points, combine_f64, common_dim, grid_points, SearchConfig, Tracker, FD_STEP};

const MAX_RESTARTS: usize = 20;
const MAX_STEPS_PER_RUN: usize = 200;
const MIN_STEP: f64 = 1e-10;
const INVERSE_ITERATIONS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusOutcome {
    pub pi: SimplexPoint<f64>,
    pub rho: f64,
    /// `rho < 1 - tol` at `pi`. Advisory only.
    pub below_one: bool,
    /// Consensus of full certification of `I - M_pi`.
    pub cross_check: Consensus,
    pub budget_spent: u64,
    /// `(evaluation, -rho)` at each improvement.
    pub objective_trace: Vec<(u64, f64)>,
}

/// Perron vector of `m` for the eigenvalue `rho`, by inverse iteration with
/// a slightly shifted `rho`.
fn perron_vector(m: &Matrix<f64>, rho: f64) -> Option<Vec<f64>> {
    let n = m.dim();
    let shift = rho + 1e-8 * rho.max(1.0);
    let shifted = Matrix::from_fn(n, |i, j| if i == j { m[(i, j)] - shift } else { m[(i, j)] });
    let mut x = vec![1.0; n];
    for _ in 0..INVERSE_ITERATIONS {
        let y = shifted.solve(&x)?;
        let norm = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if !(norm > 0.0) || !norm.is_finite() {
            return None;
        }
        let sign = if y.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        x = y.iter().map(|v| sign * v / norm).collect();
    }
    Some(x)
}

struct Radius<'a> {
    mats: &'a [Matrix<f64>],
}

impl Radius<'_> {
    fn eval(&self, w: &[f64]) -> Result<f64> {
        let m = combine_f64(self.mats, w);
        Ok(eigenvalues(&m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// `d rho / d pi_i = w^T N_i u / w^T u` when the Perron root is simple,
    /// forward differences otherwise. Returns the gradient and its cost.
    fn gradient(&self, w: &[f64], rho: f64) -> Result<(Vec<f64>, u64)> {
        let m = combine_f64(self.mats, w);
        let eigs = eigenvalues(&m)?;
        let gap = 1e-6 * rho.max(1.0);
        let simple = eigs.iter().filter(|z| (z.re - rho).hypot(z.im) < gap).count() == 1;
        if simple && rho > 0.0 {
            if let (Some(u), Some(l)) = (perron_vector(&m, rho), perron_vector(&m.transpose(), rho)) {
                let denom: f64 = l.iter().zip(&u).map(|(a, b)| a * b).sum();
                if denom.abs() > 1e-12 {
                    let g = self
                        .mats
                        .iter()
                        .map(|n| {
                            let nu = n.mul_vec(&u).expect("dimension checked");
                            l.iter().zip(&nu).map(|(a, b)| a * b).sum::<f64>() / denom
                        })
                        .collect();
                    return Ok((g, 1));
                }
            }
        }
        let g = (0..w.len())
            .map(|i| {
                let mut shifted = w.to_vec();
                shifted[i] += FD_STEP;
                Ok((self.eval(&shifted)? - rho) / FD_STEP)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((g, w.len() as u64))
    }
}

/// Minimizes the spectral radius of `M_pi = sum pi_i N_i` over the simplex
/// for entrywise nonnegative `N_i`. Probes vertices, barycenter and (for
/// small `k`) the 1/8 grid, then runs projected descent from random starts.
/// The answer is cross-checked by certifying `I - M_pi`.
pub fn minimize_spectral_radius(matrices: &[AnyMatrix], cfg: &SearchConfig) -> Result<RadiusOutcome> {
    let n = common_dim(matrices)?;
    let mats: Vec<Matrix<f64>> = matrices.iter().map(AnyMatrix::to_f64).collect();
    if let Some(i) = mats.iter().position(|m| !m.is_nonnegative()) {
        return Err(domain(format!("matrix {} has negative entries", i + 1)));
    }
    let k = mats.len();
    let radius = Radius { mats: &mats };
    let mut tracker = Tracker::new(cfg.budget);

    let mut probes = anchor_points(k);
    if k <= cfg.grid_max_k {
        probes.extend(grid_points(k));
    }
    for p in &probes {
        if !tracker.charge(1) {
            break;
        }
        tracker.record(-radius.eval(p.weights())?, p);
    }

    let mut restart = 1;
    while k > 1 && restart <= MAX_RESTARTS && !tracker.exhausted() {
        let mut pi = random_simplex_point(k, &mut restart_rng(cfg.seed, restart));
        restart += 1;
        if !tracker.charge(1) {
            break;
        }
        let mut rho = radius.eval(pi.weights())?;
        tracker.record(-rho, &pi);
        let mut step = 0.1;
        'run: for _ in 0..MAX_STEPS_PER_RUN {
            let (g, cost) = radius.gradient(pi.weights(), rho)?;
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
                let moved: Vec<f64> = pi.weights().iter().zip(&g).map(|(p, d)| p - step * d / norm).collect();
                let cand = SimplexPoint::project(&moved);
                let r = radius.eval(cand.weights())?;
                if r < rho {
                    (pi, rho) = (cand, r);
                    tracker.record(-rho, &pi);
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
        }
    }

    let (neg_rho, best) = tracker.best();
    let pi = best.cloned().unwrap_or_else(|| SimplexPoint::uniform(k));
    let rho = -neg_rho;
    let m = combine_f64(&mats, pi.weights());
    let b = Matrix::from_fn(n, |i, j| if i == j { 1.0 - m[(i, j)] } else { -m[(i, j)] });
    let cross_check = certify(&AnyMatrix::Float(b), cfg.tol).consensus;
    let below_one = rho < 1.0 - cfg.tol.value();
    let out = tracker.finish(super::SearchStatus::Unknown, None, Default::default());
    Ok(RadiusOutcome { pi, rho, below_one, cross_check, budget_spent: out.budget_spent, objective_trace: out.objective_trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{nonneg_parts, Graph};

    fn f(rows: &[&[f64]]) -> AnyMatrix {
        AnyMatrix::Float(Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap())
    }

    fn cfg() -> SearchConfig {
        SearchConfig { budget: 2_000, ..SearchConfig::default() }
    }

    #[test]
    fn swap_matrix_has_radius_one() {
        let out = minimize_spectral_radius(&[f(&[&[0.0, 1.0], &[1.0, 0.0]])], &cfg()).unwrap();
        assert!((out.rho - 1.0).abs() < 1e-12);
        assert!(!out.below_one);
        assert_ne!(out.cross_check, Consensus::Yes);
    }

    #[test]
    fn zero_matrix_wins() {
        let out = minimize_spectral_radius(&[f(&[&[0.0]]), f(&[&[3.0]])], &cfg()).unwrap();
        assert_eq!(out.pi.weights(), &[1.0, 0.0]);
        assert_eq!(out.rho, 0.0);
        assert!(out.below_one);
        assert_eq!(out.cross_check, Consensus::Yes);
    }

    #[test]
    fn reduction_parts_at_uniform() {
        let parts = nonneg_parts(&Graph::empty(2).unwrap(), 1).unwrap();
        let mats: Vec<Matrix<f64>> = parts.iter().map(Matrix::to_f64).collect();
        let radius = Radius { mats: &mats };
        let rho = radius.eval(&[0.5, 0.5]).unwrap();
        assert!((rho - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let any: Vec<AnyMatrix> = parts.into_iter().map(AnyMatrix::Exact).collect();
        let out = minimize_spectral_radius(&any, &cfg()).unwrap();
        assert!(out.rho <= rho + 1e-12);
        assert!(out.below_one);
        assert_eq!(out.cross_check, Consensus::Yes);
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0, 0.5], vec![0.3, 0.2, 1.0], vec![0.7, 0.1, 0.4]]).unwrap();
        let b = Matrix::from_rows(vec![vec![0.2, 0.1, 0.9], vec![1.5, 0.3, 0.2], vec![0.1, 0.6, 1.1]]).unwrap();
        let mats = [a, b];
        let radius = Radius { mats: &mats };
        let w = [0.3, 0.7];
        let rho = radius.eval(&w).unwrap();
        let (g, cost) = radius.gradient(&w, rho).unwrap();
        assert_eq!(cost, 1);
        for i in 0..2 {
            let mut hi = w.to_vec();
            let mut lo = w.to_vec();
            hi[i] += 1e-6;
            lo[i] -= 1e-6;
            let fd = (radius.eval(&hi).unwrap() - radius.eval(&lo).unwrap()) / 2e-6;
            assert!((fd - g[i]).abs() < 1e-5, "component {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn rejects_negative_entries() {
        assert!(minimize_spectral_radius(&[f(&[&[-1.0]])], &cfg()).is_err());
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = f(&[&[0.5, 0.9], &[0.2, 0.1]]);
        let b = f(&[&[0.1, 0.3], &[0.8, 0.6]]);
        let c = f(&[&[0.4, 0.0], &[0.0, 0.9]]);
        let x = minimize_spectral_radius(&[a.clone(), b.clone(), c.clone()], &cfg()).unwrap();
        let y = minimize_spectral_radius(&[a, b, c], &cfg()).unwrap();
        assert_eq!(x, y);
        assert!(x.objective_trace.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
