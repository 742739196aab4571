use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::reduction::{Graph, SimplexPoint};

/// Stationarity threshold for the replicator iteration.
pub const STATIONARITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MSolveResult {
    /// `y^T (I + C) y` at `minimizer`.
    pub value: f64,
    pub minimizer: SimplexPoint<f64>,
    pub restarts_used: usize,
}

/// Uniformly random point of the simplex (normalized exponentials).
pub(crate) fn random_simplex_point(k: usize, rng: &mut ChaCha8Rng) -> SimplexPoint<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let sum: f64 = raw.iter().sum();
    SimplexPoint::from_normalized(raw.into_iter().map(|x| x / sum).collect())
}

/// Independent stream per restart so results do not depend on scheduling.
pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn form(g: &Graph, y: &[f64]) -> f64 {
    let diag: f64 = y.iter().map(|v| v * v).sum();
    g.edges().fold(diag, |acc, (u, v)| acc + 2.0 * y[u] * y[v])
}

/// Greedy rounding: scan vertices with positive weight in order of
/// decreasing weight (ties by index) and keep each one not adjacent to a
/// vertex already kept. Output is 0-based and ascending.
pub fn extract_independent_set(g: &Graph, pi: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pi.len().min(g.vertex_count())).filter(|&v| pi[v] > 0.0).collect();
    order.sort_by(|&a, &b| pi[b].total_cmp(&pi[a]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for v in order {
        if kept.iter().all(|&u| !g.has_edge(u, v)) {
            kept.push(v);
        }
    }
    kept.sort_unstable();
    kept
}

/// Adds vertices in index order until the set is maximal.
fn extend_to_maximal(g: &Graph, set: &mut Vec<usize>) {
    for v in 0..g.vertex_count() {
        if !set.contains(&v) && set.iter().all(|&u| !g.has_edge(u, v)) {
            set.push(v);
        }
    }
    set.sort_unstable();
}

/// Replicator dynamics for `max y^T (J - C - I/2) y` on the simplex, which is
/// `min y^T (C + I/2) y` in disguise. The `I/2` regularization makes strict
/// local optima coincide with uniform weights on maximal independent sets.
fn replicator(g: &Graph, mut y: Vec<f64>, iters: usize) -> Vec<f64> {
    let n = g.vertex_count();
    let mut by = vec![0.0; n];
    for _ in 0..iters {
        // (J - C - I/2) y = 1 - C y - y/2 on the simplex
        let total: f64 = y.iter().sum();
        for u in 0..n {
            let cy: f64 = g.neighbors(u).map(|v| y[v]).sum();
            by[u] = total - cy - 0.5 * y[u];
        }
        let mean: f64 = y.iter().zip(&by).map(|(a, b)| a * b).sum();
        if mean <= 0.0 {
            break;
        }
        let stationarity = y.iter().zip(&by).map(|(a, b)| (a * (b - mean)).abs()).fold(0.0, f64::max);
        if stationarity < STATIONARITY_TOL {
            break;
        }
        for (a, b) in y.iter_mut().zip(&by) {
            *a *= b / mean;
        }
    }
    y
}

fn single_run(g: &Graph, start: SimplexPoint<f64>, iters: usize) -> (f64, SimplexPoint<f64>) {
    let n = g.vertex_count();
    let y = replicator(g, start.weights().to_vec(), iters);
    let mut set = extract_independent_set(g, &y);
    extend_to_maximal(g, &mut set);
    let rounded = SimplexPoint::uniform_on(n, &set).expect("rounded set is nonempty");
    let continuous = SimplexPoint::project(&y);
    let (vc, vr) = (form(g, continuous.weights()), form(g, rounded.weights()));
    if vr <= vc {
        (vr, rounded)
    } else {
        (vc, continuous)
    }
}

/// Multi-start minimization of `y^T (I + C) y` over the simplex. Start 0 is
/// the barycenter; the rest are uniform random simplex points drawn from a
/// per-restart stream of `seed`. Restarts run in parallel; the best value
/// wins, ties going to the lowest restart index.
pub fn motzkin_straus_min(g: &Graph, restarts: usize, iters: usize, seed: u64) -> Result<MSolveResult> {
    if restarts == 0 || iters == 0 {
        return Err(domain("restarts and iters must be at least 1"));
    }
    let n = g.vertex_count();
    let runs: Vec<(f64, SimplexPoint<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start =
                if r == 0 { SimplexPoint::uniform(n) } else { random_simplex_point(n, &mut restart_rng(seed, r)) };
            single_run(g, start, iters)
        })
        .collect();
    let (value, minimizer) = runs
        .into_iter()
        .reduce(|best, cur| if cur.0 < best.0 { cur } else { best })
        .expect("at least one restart");
    Ok(MSolveResult { value, minimizer, restarts_used: restarts })
}

/// `ceil(1/value - 1e-9)`: a lower bound on `alpha(G)` from any objective
/// value achieved on the simplex.
pub fn alpha_lower_bound(value: f64) -> Result<usize> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(domain(format!("objective value must be positive, got {value}")));
    }
    Ok((1.0 / value - 1e-9).ceil().max(1.0) as usize)
}
