//! Exact rational arithmetic over arbitrary-size integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Solves `matrix * x = rhs` exactly by Gaussian elimination.
pub fn rational_solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = matrix.len();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
    }
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (row, b) in matrix.iter().zip(rhs) {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        let mut r = row.clone();
        r.push(b.clone());
        a.push(r);
    }
    eliminate(&mut a, n)?;
    Ok(a.into_iter().map(|mut r| r.swap_remove(n)).collect())
}

/// Exact inverse of a square matrix.
pub fn rational_inverse(matrix: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        let mut r = row.clone();
        r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
        a.push(r);
    }
    eliminate(&mut a, n)?;
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

// Gauss-Jordan on an augmented matrix whose first `n` columns are square.
fn eliminate(a: &mut [Vec<Rational>], n: usize) -> Result<()> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or(Error::SingularMatrix { column: col })?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let prow = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= &factor * p;
            }
        }
    }
    Ok(())
}
