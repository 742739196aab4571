//! Eigenvalues of general real matrices (float backing only).
//!
//! Backed by nalgebra's real Schur decomposition (Hessenberg reduction plus
//! shifted QR sweeps).

use nalgebra::{DMatrix, Schur};

use crate::error::{domain, Error, Result};

use super::matrix::Matrix;

pub type Complex64 = nalgebra::Complex<f64>;

const SWEEPS_PER_DIM: usize = 1000;

/// Deflation thresholds tried in turn. QR sweeps can stall right at machine
/// epsilon on some structured matrices while converging at a few ulps.
const DEFLATION_LADDER: [f64; 4] = [f64::EPSILON, 4.0 * f64::EPSILON, 16.0 * f64::EPSILON, 64.0 * f64::EPSILON];

fn to_nalgebra(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

/// All eigenvalues with multiplicity, in the order they appear on the
/// diagonal of the real Schur form.
pub fn eigenvalues(m: &Matrix<f64>) -> Result<Vec<Complex64>> {
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(domain("matrix has non-finite entries"));
    }
    let budget = SWEEPS_PER_DIM * m.dim();
    let a = to_nalgebra(m);
    DEFLATION_LADDER
        .iter()
        .find_map(|&eps| Schur::try_new(a.clone(), eps, budget))
        .map(|schur| schur.complex_eigenvalues().iter().copied().collect())
        .ok_or(Error::NoConvergence(budget))
}

/// `max |lambda|`.
pub fn spectral_radius(m: &Matrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `max Re(lambda)`.
pub fn spectral_abscissa(m: &Matrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Collatz-Wielandt upper bound `max_i (N x)_i / x_i` on the spectral radius
/// of a nonnegative matrix.
pub fn collatz_wielandt_ratio(n: &Matrix<f64>, x: &[f64]) -> Result<f64> {
    if !n.is_nonnegative() {
        return Err(domain("Collatz-Wielandt ratio needs a nonnegative matrix"));
    }
    if x.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(domain("Collatz-Wielandt ratio needs a positive vector"));
    }
    let nx = n.mul_vec(x)?;
    Ok(nx.iter().zip(x).map(|(a, b)| a / b).fold(0.0, f64::max))
}
