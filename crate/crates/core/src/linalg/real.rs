use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves the dense real system `a·x = b` by Gaussian elimination with partial pivoting.
///
/// Fails with [`Error::IllConditioned`] when a pivot falls below `pivot_tol`
/// relative to the largest entry of `a`.
pub fn solve_real<T: Real>(a: &[Vec<T>], b: &[T], pivot_tol: T) -> Result<Vec<T>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a.len(),
        });
    }
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |m, &x| m.max(x.abs()))
        .max(T::min_positive_value());
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        let pivot = m[pivot_row][col];
        if !(pivot.abs() > pivot_tol * scale) {
            return Err(Error::IllConditioned {
                pivot: (pivot / scale).as_f64(),
            });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = m[row][col] / pivot;
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
            let r = rhs[col];
            rhs[row] -= factor * r;
        }
    }

    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let tail: T = ((row + 1)..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Ok(x)
}
