//! Small dense linear algebra over an arbitrary [`Scalar`] field.
//!
//! Exact for rationals (pivoting only needs a nonzero entry); for floats
//! pivots are chosen by magnitude and zero tests use a caller tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::matrix::Mat;
use crate::scalar::Scalar;

fn pick_pivot<S: Scalar>(a: &Mat<S>, rows: std::ops::Range<usize>, col: usize, tol: f64) -> Option<usize> {
    if S::is_exact() {
        rows.into_iter().find(|&i| !a[(i, col)].is_zero())
    } else {
        let (best, mag) = rows
            .map(|i| (i, a[(i, col)].magnitude()))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (best != usize::MAX && mag > tol).then_some(best)
    }
}

/// Determinant by Gaussian elimination.
pub fn det<S: Scalar>(m: &Mat<S>) -> S {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut acc = S::one();
    for k in 0..n {
        let Some(p) = pick_pivot(&a, k..n, k, 0.0) else {
            return S::zero();
        };
        if p != k {
            a.swap_rows(p, k);
            acc = -acc;
        }
        let piv = a[(k, k)].clone();
        acc = acc * piv.clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() / piv.clone();
            for j in k + 1..n {
                let t = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                a[(i, j)] = t;
            }
        }
    }
    acc
}

/// Row echelon form in place; returns the pivot columns. Entries with
/// magnitude below `tol` count as zero (ignored for exact scalars).
pub fn row_reduce<S: Scalar>(a: &mut Mat<S>, tol: f64) -> Vec<usize> {
    let (r, c) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        let Some(p) = pick_pivot(a, row..r, col, tol) else {
            continue;
        };
        a.swap_rows(p, row);
        let piv = a[(row, col)].clone();
        for j in col..c {
            let t = a[(row, j)].clone() / piv.clone();
            a[(row, j)] = t;
        }
        for i in 0..r {
            if i == row || a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            for j in col..c {
                let t = a[(i, j)].clone() - f.clone() * a[(row, j)].clone();
                a[(i, j)] = t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(m: &Mat<S>, tol: f64) -> usize {
    let mut a = m.clone();
    row_reduce(&mut a, tol).len()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<S: Scalar>(m: &Mat<S>) -> Option<Mat<S>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            S::one()
        } else {
            S::zero()
        }
    });
    let piv = row_reduce(&mut aug, 0.0);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(Mat::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
}

pub fn matmul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    Mat::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(S::zero(), |acc, k| acc + a[(i, k)].clone() * b[(k, j)].clone())
    })
}

pub fn identity<S: Scalar>(n: usize) -> Mat<S> {
    Mat::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
}

pub fn to_nalgebra<S: Scalar>(m: &Mat<S>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_c64())
}

/// Numerical rank with threshold `factor·ε·max(r,c)·σ_max`.
pub fn numeric_rank(m: &DMatrix<Complex64>, factor: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().svd(false, false).singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let tau = factor * f64::EPSILON * m.nrows().max(m.ncols()) as f64 * smax;
    s.iter().filter(|&&v| v > tau).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn exact_det_and_inverse() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&a), int(18));
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(3));
        let sing = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(det(&sing), int(0));
        assert!(inverse(&sing).is_none());
        assert_eq!(rank(&sing, 0.0), 1);
    }

    #[test]
    fn float_det_matches() {
        let a = Mat::from_rows(vec![vec![0.0, 2.0], vec![3.0, 1.0]]).unwrap();
        assert!((det(&a) + 6.0f64).abs() < 1e-12);
    }
}
