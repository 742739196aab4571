//! Feasibility search over matrix polytopes `{ sum pi_i A_i : pi in simplex }`.
//!
//! Deciding whether a polytope contains a nonsingular M-matrix is NP-hard,
//! so the general search can only ever answer `FEASIBLE` (with a
//! re-verified certificate) or `UNKNOWN`. `INFEASIBLE` comes only from the
//! symmetric path, where the problem is a concave maximization with a
//! certified upper bound.

mod general;
mod hurwitz;
mod spectral;
mod symmetric;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cert::{certify, CertificationReport};
use crate::error::{domain, Error, Result};
use crate::linalg::{AnyMatrix, Matrix, Rational, Tolerance};
use crate::reduction::{convex_combination_any, SimplexPoint};

pub use general::search_general;
pub use hurwitz::hurwitz_search;
pub use spectral::{minimize_spectral_radius, RadiusOutcome};
pub use symmetric::{search_symmetric, SymmetricConfig};

/// Denominator bits used when turning a float certificate into an exact one.
pub const CERTIFICATE_BITS: u32 = 30;

/// Grid resolution: weights are multiples of `1 / GRID_RESOLUTION`.
pub const GRID_RESOLUTION: usize = 8;

/// Finite-difference step for nonsmooth objectives.
pub const FD_STEP: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Feasible,
    Infeasible,
    Unknown,
}

impl SearchStatus {
    /// CLI exit code: 0 feasible, 1 infeasible, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Feasible => 0,
            Self::Infeasible => 1,
            Self::Unknown => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub weights: SimplexPoint<f64>,
    /// Present when the certificate was verified in exact arithmetic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_weights: Option<SimplexPoint<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub certificate: Option<Certificate>,
    /// `(evaluation, best merit so far)`, recorded at each improvement.
    pub objective_trace: Vec<(u64, f64)>,
    pub budget_spent: u64,
    /// Margins at the certificate (or at the best point when none was
    /// certified), keyed by condition.
    pub margins: BTreeMap<String, f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Maximum number of objective evaluations.
    pub budget: u64,
    pub seed: u64,
    pub tol: Tolerance,
    /// The grid pass runs only for `k <= grid_max_k` matrices.
    pub grid_max_k: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { budget: 50_000, seed: 0, tol: Tolerance::DEFAULT, grid_max_k: 4 }
    }
}

/// Checks the matrix list is nonempty with a common dimension.
pub(crate) fn common_dim(matrices: &[AnyMatrix]) -> Result<usize> {
    let first = matrices.first().ok_or_else(|| domain("need at least one matrix"))?;
    let n = first.dim();
    if let Some(bad) = matrices.iter().find(|m| m.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    Ok(n)
}

/// Evaluation counter plus best-so-far trace. Merits are "higher is better".
pub(crate) struct Tracker {
    limit: u64,
    spent: u64,
    best: f64,
    best_point: Option<SimplexPoint<f64>>,
    trace: Vec<(u64, f64)>,
}

impl Tracker {
    pub(crate) fn new(limit: u64) -> Self {
        Self { limit, spent: 0, best: f64::NEG_INFINITY, best_point: None, trace: Vec::new() }
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.spent >= self.limit
    }

    /// Charges `cost` evaluations; false when the budget cannot cover them.
    pub(crate) fn charge(&mut self, cost: u64) -> bool {
        if self.spent + cost > self.limit {
            return false;
        }
        self.spent += cost;
        true
    }

    pub(crate) fn record(&mut self, merit: f64, point: &SimplexPoint<f64>) {
        if merit > self.best {
            self.best = merit;
            self.best_point = Some(point.clone());
            self.trace.push((self.spent, merit));
        }
    }

    pub(crate) fn best(&self) -> (f64, Option<&SimplexPoint<f64>>) {
        (self.best, self.best_point.as_ref())
    }

    pub(crate) fn finish(
        self,
        status: SearchStatus,
        certificate: Option<Certificate>,
        margins: BTreeMap<String, f64>,
    ) -> SearchOutcome {
        SearchOutcome { status, certificate, objective_trace: self.trace, budget_spent: self.spent, margins }
    }
}

/// Every composition of `GRID_RESOLUTION` into `k` parts, as simplex points.
pub(crate) fn grid_points(k: usize) -> Vec<SimplexPoint<f64>> {
    fn rec(k: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == k {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for take in (0..=left).rev() {
            prefix.push(take);
            rec(k, left - take, prefix, out);
            prefix.pop();
        }
    }
    let mut parts = Vec::new();
    rec(k, GRID_RESOLUTION, &mut Vec::with_capacity(k), &mut parts);
    parts
        .into_iter()
        .map(|p| SimplexPoint::from_normalized(p.into_iter().map(|c| c as f64 / GRID_RESOLUTION as f64).collect()))
        .collect()
}

/// Simplex vertices followed by the barycenter.
pub(crate) fn anchor_points(k: usize) -> Vec<SimplexPoint<f64>> {
    let mut pts: Vec<SimplexPoint<f64>> = (0..k).map(|i| SimplexPoint::vertex(k, i)).collect();
    if k > 1 {
        pts.push(SimplexPoint::uniform(k));
    }
    pts
}

/// Re-verifies a float point from scratch: rationalizes it when every input
/// is exact, forms the combination, and runs full certification.
pub(crate) fn verify_mmatrix(
    matrices: &[AnyMatrix],
    pi: &SimplexPoint<f64>,
    tol: Tolerance,
) -> Result<(Certificate, CertificationReport)> {
    let exact_pi = matrices.iter().all(AnyMatrix::is_exact).then(|| pi.rationalize(CERTIFICATE_BITS));
    let weights = exact_pi.as_ref().map(SimplexPoint::to_f64).unwrap_or_else(|| pi.clone());
    let b = convex_combination_any(matrices, &weights, exact_pi.as_ref())?;
    let report = certify(&b, tol);
    Ok((Certificate { weights, exact_weights: exact_pi }, report))
}

pub(crate) fn report_margins(report: &CertificationReport) -> BTreeMap<String, f64> {
    report
        .verdicts
        .iter()
        .filter_map(|(c, o)| o.verdict().filter(|v| v.margin.is_finite()).map(|v| (c.name().to_string(), v.margin)))
        .collect()
}

/// Float combination `sum pi_i M_i` without allocation-heavy generics.
pub(crate) fn combine_f64(mats: &[Matrix<f64>], w: &[f64]) -> Matrix<f64> {
    let n = mats[0].dim();
    let mut data = vec![0.0; n * n];
    for (m, &wi) in mats.iter().zip(w) {
        if wi == 0.0 {
            continue;
        }
        for (acc, x) in data.iter_mut().zip(m.as_slice()) {
            *acc += wi * x;
        }
    }
    Matrix::new(n, data).expect("dimension checked by caller")
}
