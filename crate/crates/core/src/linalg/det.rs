//! Elimination kernels: float LU with partial pivoting, fraction-free
//! (Bareiss) elimination over the integers for rational matrices, and a
//! generic Gauss-Jordan solver.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::{denominator_lcm, Rational, Scalar};

pub(crate) fn lu_det(n: usize, data: &[f64]) -> f64 {
    let mut a = data.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let (p, pivot_abs) = (k..n)
            .map(|i| (i, a[i * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_abs == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    det
}

/// Leading minors in float arithmetic. Elimination without row exchanges
/// gives them as running products of pivots; if a pivot is tiny relative to
/// the matrix, the affected minors are recomputed from pivoted LU on the
/// leading blocks.
pub(crate) fn lu_leading_minors(m: &Matrix<f64>) -> Vec<f64> {
    let n = m.dim();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut a = m.as_slice().to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut running = 1.0;
    for k in 0..n {
        let pivot = a[k * n + k];
        if pivot.abs() <= 1e-6 * scale {
            minors.extend((k + 1..=n).map(|size| {
                let block: Vec<f64> = (0..size).flat_map(|i| m.row(i)[..size].iter().copied()).collect();
                lu_det(size, &block)
            }));
            break;
        }
        running *= pivot;
        minors.push(running);
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    minors
}

/// Clears denominators row by row. Returns the integer rows and, for each
/// row, the factor it was multiplied by.
fn integerize(m: &Matrix<Rational>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    m.rows()
        .map(|row| {
            let l = denominator_lcm(row.iter());
            let ints = row.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect();
            (ints, l)
        })
        .unzip()
}

/// One fraction-free elimination step on pivot `k`. `prev` is the previous
/// pivot; the division is exact.
fn bareiss_step(a: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let n = a.len();
    for i in k + 1..n {
        for j in k + 1..n {
            let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / prev;
            a[i][j] = v;
        }
        a[i][k] = BigInt::zero();
    }
}

fn bareiss_int_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

pub(crate) fn bareiss_det(m: &Matrix<Rational>) -> Rational {
    let (ints, scales) = integerize(m);
    let scale = scales.into_iter().fold(BigInt::one(), |acc, s| acc * s);
    Rational::new(bareiss_int_det(ints), scale)
}

/// Without row exchanges, the pivot at step `k` of Bareiss elimination is
/// exactly the `(k+1)`-th leading minor of the integerized matrix. When a
/// pivot vanishes the remaining minors are computed block by block.
pub(crate) fn bareiss_leading_minors(m: &Matrix<Rational>) -> Vec<Rational> {
    let n = m.dim();
    let (mut a, scales) = integerize(m);
    let mut minors = Vec::with_capacity(n);
    let mut prefix = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        prefix *= &scales[k];
        minors.push(Rational::new(a[k][k].clone(), prefix.clone()));
        if a[k][k].is_zero() {
            minors.extend((k + 2..=n).map(|size| bareiss_det(&m.leading_block(size))));
            break;
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
    }
    minors
}

/// Solves `A X = B` with `A` `n x n` and `B` `n x m` (row-major) by
/// Gauss-Jordan elimination. Returns `None` when `A` is singular.
pub(crate) fn solve<T: Scalar>(n: usize, mut a: Vec<T>, mut b: Vec<T>, m: usize) -> Option<Vec<T>> {
    let scale = a.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max) * n as f64;
    for k in 0..n {
        let p = (k..n).fold(k, |best, i| {
            if a[i * n + k].pivot_weight() > a[best * n + k].pivot_weight() {
                i
            } else {
                best
            }
        });
        if a[p * n + k].negligible_pivot(scale) {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            for j in 0..m {
                b.swap(k * m + j, p * m + j);
            }
        }
        let pivot = a[k * n + k].clone();
        for j in 0..n {
            a[k * n + j] = a[k * n + j].clone() / pivot.clone();
        }
        for j in 0..m {
            b[k * m + j] = b[k * m + j].clone() / pivot.clone();
        }
        for i in (0..n).filter(|&i| i != k) {
            let f = a[i * n + k].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                a[i * n + j] = a[i * n + j].clone() - f.clone() * a[k * n + j].clone();
            }
            for j in 0..m {
                b[i * m + j] = b[i * m + j].clone() - f.clone() * b[k * m + j].clone();
            }
        }
    }
    Some(b)
}
