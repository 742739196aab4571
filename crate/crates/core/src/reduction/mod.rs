//! Reduction from maximum stable set to the M-matrix polytope problem.
//!
//! For a graph on `n` vertices with adjacency matrix `C` and a target `j`,
//! gadget `i` is the `(n+1) x (n+1)` Z-matrix
//!
//! ```text
//!     A_i = [ I        -(e_i + c_i) ]
//!           [ -e_i^T    1/j         ]
//! ```
//!
//! Any convex combination `B = sum pi_i A_i` has identity leading block, so it
//! is a nonsingular M-matrix iff `det B = 1/j - pi^T (I + C) pi > 0`. By the
//! Motzkin-Straus identity the minimum of the quadratic form is `1/alpha(G)`,
//! hence some combination is an M-matrix iff `alpha(G) > j`.

mod graph;
mod simplex;

use serde_json::Value;

use crate::error::{domain, Error, Result};
use crate::linalg::{linear_combination, matrices_to_json, AnyMatrix, Matrix, Rational, Scalar};

pub use graph::Graph;
pub use simplex::{SimplexPoint, FLOAT_SUM_SLACK};

/// The `n` gadget matrices for `(G, j)`, in exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionInstance {
    source: Graph,
    j: usize,
    gadgets: Vec<Matrix<Rational>>,
}

impl ReductionInstance {
    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn gadgets(&self) -> &[Matrix<Rational>] {
        &self.gadgets
    }

    /// Side length of each gadget, `n + 1`.
    pub fn dim(&self) -> usize {
        self.source.vertex_count() + 1
    }

    pub fn as_any(&self) -> Vec<AnyMatrix> {
        self.gadgets.iter().cloned().map(AnyMatrix::Exact).collect()
    }

    /// `B_pi`.
    pub fn combine(&self, pi: &SimplexPoint<Rational>) -> Result<Matrix<Rational>> {
        convex_combination(&self.gadgets, pi)
    }

    /// JSON array of the gadgets in the exact matrix format.
    pub fn to_json(&self) -> Value {
        matrices_to_json(&self.as_any())
    }
}

fn check_target(g: &Graph, j: usize) -> Result<()> {
    let n = g.vertex_count();
    if j == 0 || j > n {
        return Err(domain(format!("target j = {j} must satisfy 1 <= j <= n = {n}")));
    }
    Ok(())
}

/// `e_i + c_i`: the indicator of `i` and its neighbours.
fn closed_neighborhood(g: &Graph, i: usize) -> impl Iterator<Item = bool> + '_ {
    (0..g.vertex_count()).map(move |r| r == i || g.has_edge(r, i))
}

pub fn build_instance(g: &Graph, j: usize) -> Result<ReductionInstance> {
    check_target(g, j)?;
    let n = g.vertex_count();
    let corner = Rational::from_ratio(1, j as i64);
    let gadgets = (0..n)
        .map(|i| {
            let column: Vec<bool> = closed_neighborhood(g, i).collect();
            Matrix::from_fn(n + 1, |r, c| match (r < n, c < n) {
                (true, true) => {
                    if r == c {
                        Rational::from_ratio(1, 1)
                    } else {
                        Rational::from_ratio(0, 1)
                    }
                }
                (true, false) => Rational::from_ratio(-(column[r] as i64), 1),
                (false, true) => Rational::from_ratio(-((c == i) as i64), 1),
                (false, false) => corner.clone(),
            })
        })
        .collect();
    Ok(ReductionInstance { source: g.clone(), j, gadgets })
}

/// The nonnegative parts `N_i` with `A_i = I - N_i`:
///
/// ```text
///     N_i = [ 0        e_i + c_i ]
///           [ e_i^T    1 - 1/j   ]
/// ```
pub fn nonneg_parts(g: &Graph, j: usize) -> Result<Vec<Matrix<Rational>>> {
    check_target(g, j)?;
    let n = g.vertex_count();
    let corner = Rational::from_ratio(j as i64 - 1, j as i64);
    Ok((0..n)
        .map(|i| {
            let column: Vec<bool> = closed_neighborhood(g, i).collect();
            Matrix::from_fn(n + 1, |r, c| match (r < n, c < n) {
                (true, true) => Rational::from_ratio(0, 1),
                (true, false) => Rational::from_ratio(column[r] as i64, 1),
                (false, true) => Rational::from_ratio((c == i) as i64, 1),
                (false, false) => corner.clone(),
            })
        })
        .collect())
}

/// `sum_i pi_i M_i`.
pub fn convex_combination<T: Scalar>(matrices: &[Matrix<T>], pi: &SimplexPoint<T>) -> Result<Matrix<T>> {
    if matrices.len() != pi.len() {
        return Err(Error::DimensionMismatch { expected: matrices.len(), found: pi.len() });
    }
    linear_combination(matrices, pi.weights())
}

/// Convex combination over mixed-backing inputs: exact when every input and
/// the weights are exact, float otherwise.
pub fn convex_combination_any(matrices: &[AnyMatrix], pi: &SimplexPoint<f64>, exact_pi: Option<&SimplexPoint<Rational>>) -> Result<AnyMatrix> {
    match exact_pi {
        Some(q) if matrices.iter().all(AnyMatrix::is_exact) => {
            let exact: Vec<Matrix<Rational>> = matrices.iter().map(AnyMatrix::to_exact).collect::<Result<_>>()?;
            Ok(AnyMatrix::Exact(convex_combination(&exact, q)?))
        }
        _ => {
            let float: Vec<Matrix<f64>> = matrices.iter().map(AnyMatrix::to_f64).collect();
            Ok(AnyMatrix::Float(convex_combination(&float, pi)?))
        }
    }
}

/// `pi^T (I + C) pi`.
pub fn stable_set_form<T: Scalar>(g: &Graph, pi: &SimplexPoint<T>) -> Result<T> {
    let n = g.vertex_count();
    if pi.len() != n {
        return Err(domain(format!("weight vector has length {}, graph has {n} vertices", pi.len())));
    }
    let w = pi.weights();
    let diag = w.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone());
    let two = T::from_usize(2);
    Ok(g.edges().fold(diag, |acc, (u, v)| acc + two.clone() * w[u].clone() * w[v].clone()))
}

/// Closed form of `det B_pi`: `1/j - pi^T (I + C) pi`.
pub fn det_closed_form<T: Scalar>(g: &Graph, j: usize, pi: &SimplexPoint<T>) -> Result<T> {
    check_target(g, j)?;
    Ok(T::one() / T::from_usize(j) - stable_set_form(g, pi)?)
}

/// `B_pi` is a nonsingular M-matrix iff its determinant is positive; decided
/// exactly.
pub fn feasible_by_det(g: &Graph, j: usize, pi: &SimplexPoint<Rational>) -> Result<bool> {
    use num_traits::Signed;
    Ok(det_closed_form(g, j, pi)?.is_positive())
}

/// Uniform weights on a (validated) independent set `set` of 0-based
/// vertices. The quadratic form there is exactly `1/|set|`.
pub fn witness_from_independent_set(g: &Graph, set: &[usize]) -> Result<SimplexPoint<Rational>> {
    if set.is_empty() {
        return Err(domain("independent set must be nonempty"));
    }
    g.check_independent(set)?;
    SimplexPoint::uniform_on(g.vertex_count(), set)
}

/// Ground-truth feasibility of the instance `(G, j)` given `alpha(G)`: some
/// convex combination is a nonsingular M-matrix iff `alpha > j`.
pub fn decide_with_alpha(g: &Graph, j: usize, alpha: usize) -> Result<bool> {
    check_target(g, j)?;
    Ok(alpha > j)
}

/// The stable-set question itself, `alpha >= j`. Instance feasibility
/// corresponds to the strict version, [`decide_with_alpha`].
pub fn has_stable_set_of_size(g: &Graph, j: usize, alpha: usize) -> Result<bool> {
    check_target(g, j)?;
    Ok(alpha >= j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn exact(rows: &[&[(i64, i64)]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(p, d)| q(p, d)).collect()).collect()).unwrap()
    }

    fn edge() -> Graph {
        Graph::from_edges(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn gadget_for_single_edge() {
        let inst = build_instance(&edge(), 1).unwrap();
        let want = exact(&[&[(1, 1), (0, 1), (-1, 1)], &[(0, 1), (1, 1), (-1, 1)], &[(-1, 1), (0, 1), (1, 1)]]);
        assert_eq!(inst.gadgets()[0], want);
        assert_eq!(inst.gadgets().len(), 2);
    }

    #[test]
    fn gadget_for_empty_graph() {
        let inst = build_instance(&Graph::empty(2).unwrap(), 2).unwrap();
        let want = exact(&[&[(1, 1), (0, 1), (-1, 1)], &[(0, 1), (1, 1), (0, 1)], &[(-1, 1), (0, 1), (1, 2)]]);
        assert_eq!(inst.gadgets()[0], want);
        assert!(inst.gadgets().iter().all(Matrix::is_z_matrix));
    }

    #[test]
    fn target_out_of_range() {
        let g = Graph::empty(3).unwrap();
        assert!(build_instance(&g, 0).is_err());
        assert!(build_instance(&g, 4).is_err());
        assert!(nonneg_parts(&g, 0).is_err());
        assert!(decide_with_alpha(&g, 5, 3).is_err());
    }

    #[test]
    fn uniform_combination_of_empty_graph() {
        let inst = build_instance(&Graph::empty(2).unwrap(), 1).unwrap();
        let b = inst.combine(&SimplexPoint::uniform(2)).unwrap();
        let want = exact(&[&[(1, 1), (0, 1), (-1, 2)], &[(0, 1), (1, 1), (-1, 2)], &[(-1, 2), (-1, 2), (1, 1)]]);
        assert_eq!(b, want);
        assert_eq!(b.det(), q(1, 2));
        let first = inst.combine(&SimplexPoint::vertex(2, 0)).unwrap();
        assert_eq!(first, inst.gadgets()[0]);
    }

    #[test]
    fn combination_dimension_checks() {
        let inst = build_instance(&Graph::empty(2).unwrap(), 1).unwrap();
        assert!(inst.combine(&SimplexPoint::uniform(3)).is_err());
        let mixed = vec![Matrix::<f64>::identity(2), Matrix::identity(3)];
        assert!(matches!(convex_combination(&mixed, &SimplexPoint::uniform(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let e2 = Graph::empty(2).unwrap();
        assert_eq!(det_closed_form(&e2, 1, &SimplexPoint::<Rational>::uniform(2)).unwrap(), q(1, 2));
        for pi in [SimplexPoint::uniform(2), SimplexPoint::vertex(2, 1), SimplexPoint::from_strings(&["1/3", "2/3"]).unwrap()] {
            assert_eq!(det_closed_form(&edge(), 1, &pi).unwrap(), q(0, 1));
            assert!(!feasible_by_det(&edge(), 1, &pi).unwrap());
        }
        assert!(feasible_by_det(&e2, 1, &SimplexPoint::uniform(2)).unwrap());
        assert!(feasible_by_det(&Graph::empty(3).unwrap(), 2, &SimplexPoint::uniform(3)).unwrap());
        assert!(det_closed_form(&e2, 1, &SimplexPoint::<Rational>::uniform(3)).is_err());
    }

    #[test]
    fn closed_form_matches_direct_determinant() {
        let g = Graph::cycle(5).unwrap();
        let pi = SimplexPoint::from_strings(&["1/7", "2/7", "0", "3/7", "1/7"]).unwrap();
        for j in 1..=5 {
            let inst = build_instance(&g, j).unwrap();
            assert_eq!(inst.combine(&pi).unwrap().det(), det_closed_form(&g, j, &pi).unwrap());
        }
    }

    #[test]
    fn witness_examples() {
        let e3 = Graph::empty(3).unwrap();
        let w = witness_from_independent_set(&e3, &[0, 1, 2]).unwrap();
        assert_eq!(w.weights(), &[q(1, 3), q(1, 3), q(1, 3)]);
        let w = witness_from_independent_set(&edge(), &[0]).unwrap();
        assert_eq!(w.weights(), &[q(1, 1), q(0, 1)]);
        let c5 = Graph::cycle(5).unwrap();
        let w = witness_from_independent_set(&c5, &[0, 2]).unwrap();
        assert_eq!(stable_set_form(&c5, &w).unwrap(), q(1, 2));
        assert!(matches!(witness_from_independent_set(&c5, &[0, 1]), Err(Error::NotIndependent(1, 2))));
        assert!(witness_from_independent_set(&c5, &[]).is_err());
    }

    #[test]
    fn nonneg_parts_examples() {
        let parts = nonneg_parts(&Graph::empty(2).unwrap(), 1).unwrap();
        let want = exact(&[&[(0, 1), (0, 1), (1, 1)], &[(0, 1), (0, 1), (0, 1)], &[(1, 1), (0, 1), (0, 1)]]);
        assert_eq!(parts[0], want);

        let g = Graph::petersen();
        for j in [1, 4, 10] {
            let inst = build_instance(&g, j).unwrap();
            let parts = nonneg_parts(&g, j).unwrap();
            let id = Matrix::<Rational>::identity(11);
            for (a, n) in inst.gadgets().iter().zip(&parts) {
                assert!(n.is_nonnegative());
                assert_eq!(&id.sub(n).unwrap(), a);
            }
            if j == 10 {
                assert_eq!(parts[0][(10, 10)], q(9, 10));
            }
        }
    }

    #[test]
    fn alpha_decisions() {
        assert!(!decide_with_alpha(&edge(), 1, 1).unwrap());
        assert!(decide_with_alpha(&Graph::empty(2).unwrap(), 1, 2).unwrap());
        assert!(has_stable_set_of_size(&edge(), 1, 1).unwrap());
        // j = n: feasible iff edgeless (alpha = n)
        assert!(!decide_with_alpha(&edge(), 2, 1).unwrap());
        assert!(!decide_with_alpha(&Graph::empty(2).unwrap(), 2, 2).unwrap());
    }

    #[test]
    fn entry_writes_are_cubic() {
        let g = Graph::cycle(6).unwrap();
        let inst = build_instance(&g, 2).unwrap();
        let cells: usize = inst.gadgets().iter().map(|m| m.as_slice().len()).sum();
        assert_eq!(cells, 6 * 7 * 7);
    }
}
