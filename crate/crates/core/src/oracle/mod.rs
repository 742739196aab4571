//! Ground truth for the reduction: exact independence numbers and the
//! Motzkin-Straus quadratic program `min_{y in simplex} y^T (I + C) y = 1/alpha`.

mod mis;
mod motzkin;

pub use mis::{max_independent_set, max_independent_set_with_budget, IndependentSetResult, DEFAULT_NODE_BUDGET};
pub use motzkin::{alpha_lower_bound, extract_independent_set, motzkin_straus_min, MSolveResult, STATIONARITY_TOL};

pub(crate) use motzkin::{random_simplex_point, restart_rng};
