//! Exact Gaussian elimination over ℚ and fraction-free determinants over ℤ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    /// The columns are linearly dependent.
    Singular,
    /// No solution exists.
    Inconsistent,
}

/// Solves `A·u = b` for an `m × n` matrix with `m ≥ n` and full column rank.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>, SolveError> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(pr) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(SolveError::Singular);
        };
        m.swap(pivot_row, pr);
        let inv = m[pivot_row][col].recip();
        for entry in m[pivot_row].iter_mut().skip(col) {
            *entry *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, p) in row.iter_mut().zip(&pivot).skip(col) {
                *entry -= &factor * p;
            }
        }
        pivot_row += 1;
    }
    if m[cols..].iter().any(|row| !row[cols].is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    Ok(m[..cols].iter().map(|row| row[cols].clone()).collect())
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign.is_negative() {
        -det
    } else {
        det
    }
}
