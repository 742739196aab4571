use std::ops::{Index, IndexMut};

use crate::error::{domain, Error, Result};

use super::scalar::{Rational, Scalar};

/// Dense square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from row-major data. `n = 0` is rejected.
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(domain("matrix dimension must be positive"));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let data = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n)
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.n, "block size {k} out of range");
        Self::from_fn(k, |i, j| self[(i, j)].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn scaled(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(T::zero(), |acc, l| acc + self[(i, l)].clone() * other[(l, j)].clone())
        }))
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(self
            .rows()
            .map(|row| row.iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    /// `x^T M x`.
    pub fn quadratic_form(&self, x: &[T]) -> Result<T> {
        let mx = self.mul_vec(x)?;
        Ok(x.iter().zip(&mx).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Largest row sum of absolute values (the induced infinity norm).
    pub fn max_abs_row_sum(&self) -> f64 {
        self.rows()
            .map(|r| r.iter().map(|x| x.to_f64().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            (0..i).all(|j| {
                if T::EXACT {
                    self[(i, j)] == self[(j, i)]
                } else {
                    (self[(i, j)].to_f64() - self[(j, i)].to_f64()).abs() <= tol
                }
            })
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// Z-matrix test: every off-diagonal entry is nonpositive. Float backing
    /// allows `1e-12` of slack.
    pub fn is_z_matrix(&self) -> bool {
        let slack = if T::EXACT { 0.0 } else { 1e-12 };
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                i == j
                    || if T::EXACT {
                        !self[(i, j)].is_positive()
                    } else {
                        self[(i, j)].to_f64() <= slack
                    }
            })
        })
    }

    pub fn max_diagonal(&self) -> T {
        (1..self.n).fold(self[(0, 0)].clone(), |best, i| {
            if self[(i, i)] > best {
                self[(i, i)].clone()
            } else {
                best
            }
        })
    }

    pub fn det(&self) -> T {
        T::determinant(self)
    }

    /// `k`-th element is the determinant of the top-left `(k+1) x (k+1)`
    /// block.
    pub fn leading_principal_minors(&self) -> Vec<T> {
        T::leading_minors(self)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let rhs = Self::identity(n).data;
        super::det::solve(n, self.data.clone(), rhs, n).map(|data| Self { n, data })
    }

    /// Solves `M x = rhs`; `None` when `M` is singular.
    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        if rhs.len() != self.n {
            return None;
        }
        super::det::solve(self.n, self.data.clone(), rhs.to_vec(), 1)
    }

    /// `D - C A^{-1} B` for the block split `[[A, B], [C, D]]` with `A` of
    /// size `k`.
    pub fn schur_complement(&self, k: usize) -> Result<Self> {
        let n = self.n;
        if k == 0 || k >= n {
            return Err(domain(format!("split index {k} must lie in 1..{n}")));
        }
        let m = n - k;
        let a: Vec<T> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|ij| self[ij].clone()).collect();
        let b: Vec<T> = (0..k).flat_map(|i| (k..n).map(move |j| (i, j))).map(|ij| self[ij].clone()).collect();
        let x = super::det::solve(k, a, b, m).ok_or(Error::SingularBlock(k))?;
        Ok(Self::from_fn(m, |i, j| {
            let correction = (0..k).fold(T::zero(), |acc, l| {
                acc + self[(k + i, l)].clone() * x[l * m + j].clone()
            });
            self[(k + i, k + j)].clone() - correction
        }))
    }
}

impl Matrix<f64> {
    /// Converts a float matrix to rationals by reading the shortest decimal
    /// representation of each entry. Meant for values that came from input
    /// text, not from computation.
    pub fn to_exact_from_input(&self) -> Result<Matrix<Rational>> {
        let data = self
            .data
            .iter()
            .map(|x| {
                if !x.is_finite() {
                    return Err(domain(format!("entry {x} has no exact value")));
                }
                super::scalar::parse_rational(&x.to_string())
                    .ok_or_else(|| Error::Parse(format!("cannot read {x} as a ratio")))
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(self.n, data)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// `sum_i weights[i] * matrices[i]`.
pub fn linear_combination<T: Scalar>(matrices: &[Matrix<T>], weights: &[T]) -> Result<Matrix<T>> {
    let first = matrices.first().ok_or_else(|| domain("empty matrix list"))?;
    if weights.len() != matrices.len() {
        return Err(Error::DimensionMismatch { expected: matrices.len(), found: weights.len() });
    }
    let n = first.dim();
    let mut data = vec![T::zero(); n * n];
    for (m, w) in matrices.iter().zip(weights) {
        if m.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
        }
        if w.is_zero() {
            continue;
        }
        for (acc, x) in data.iter_mut().zip(&m.data) {
            *acc = acc.clone() + w.clone() * x.clone();
        }
    }
    Matrix::new(n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(Matrix::<f64>::from_rows(vec![]).is_err());
        assert!(Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn z_matrix_predicate() {
        assert!(Matrix::<f64>::identity(2).is_z_matrix());
        assert!(!m(&[&[1.0, 0.5], &[0.0, 1.0]]).is_z_matrix());
        assert!(m(&[&[1.0, 1e-13], &[0.0, 1.0]]).is_z_matrix());
        assert!(m(&[&[5.0]]).is_z_matrix());
    }

    #[test]
    fn schur_complement_examples() {
        let a = m(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let s = a.schur_complement(1).unwrap();
        assert!((s[(0, 0)] - 1.5).abs() < 1e-15);

        let bd = m(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 0.0], &[0.0, 0.0, 7.0]]);
        assert_eq!(bd.schur_complement(2).unwrap(), m(&[&[7.0]]));

        let singular = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(matches!(singular.schur_complement(1), Err(Error::SingularBlock(1))));
        assert!(a.schur_complement(0).is_err());
        assert!(a.schur_complement(2).is_err());
    }

    #[test]
    fn inverse_of_two_by_two() {
        let inv = m(&[&[2.0, -1.0], &[-1.0, 2.0]]).inverse().unwrap();
        let want = m(&[&[2.0 / 3.0, 1.0 / 3.0], &[1.0 / 3.0, 2.0 / 3.0]]);
        for (a, b) in inv.as_slice().iter().zip(want.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(m(&[&[1.0, 1.0], &[1.0, 1.0]]).inverse().is_none());
    }

    #[test]
    fn exact_from_input_reads_decimals() {
        let x = m(&[&[0.1, -0.5], &[3.0, 0.25]]).to_exact_from_input().unwrap();
        assert_eq!(x[(0, 0)], Rational::from_ratio(1, 10));
        assert_eq!(x[(1, 1)], Rational::from_ratio(1, 4));
    }
}
