//! Small dense real linear algebra: Jacobi eigensolver, Cholesky/LU solves
//! and row reduction. Sizes here never exceed a few dozen.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as the columns of the second matrix.
pub fn sym_eigen<T: Real>(a: &[Vec<T>]) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::NumericalFailure("eigensolver needs a square matrix".into()));
    }
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("non-finite matrix entry".into()));
    }
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut v: Vec<Vec<T>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    let frob: T = m.iter().flatten().map(|&x| x * x).sum::<T>().sqrt();
    let target = T::epsilon() * T::lit(n as f64) * frob.max(T::min_positive_value());

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum::<T>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq == T::zero() {
                    continue;
                }
                // below the rounding level of both diagonal entries: drop it
                let small = apq.abs() * T::lit(100.0);
                if m[p][p].abs() + small == m[p][p].abs() && m[q][q].abs() + small == m[q][q].abs() {
                    m[p][q] = T::zero();
                    m[q][p] = T::zero();
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("Jacobi iteration did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    Ok((values, vectors))
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub(crate) fn cholesky_solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = b.len();
    let mut l = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(s > T::zero()) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Solves a symmetric positive (semi)definite system robustly: Cholesky after
/// symmetric diagonal scaling, falling back to an eigenvalue pseudo-inverse.
pub(crate) fn spd_solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = b.len();
    let d: Vec<T> = (0..n)
        .map(|i| {
            let v = a[i][i];
            if v > T::zero() && v.is_finite() {
                T::one() / v.sqrt()
            } else {
                T::one()
            }
        })
        .collect();
    let scaled: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| a[i][j] * d[i] * d[j]).collect()).collect();
    let sb: Vec<T> = (0..n).map(|i| b[i] * d[i]).collect();
    let y = cholesky_solve(&scaled, &sb).or_else(|| {
        let (vals, vecs) = sym_eigen(&scaled).ok()?;
        let top = vals.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let floor = top * T::epsilon() * T::lit(64.0);
        let mut y = vec![T::zero(); n];
        for k in 0..n {
            if vals[k] <= floor {
                continue;
            }
            let c: T = (0..n).map(|i| vecs[i][k] * sb[i]).sum::<T>() / vals[k];
            for i in 0..n {
                y[i] += c * vecs[i][k];
            }
        }
        Some(y)
    })?;
    let x: Vec<T> = (0..n).map(|i| y[i] * d[i]).collect();
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Reduced row echelon form of `a` with `rhs` carried along.
pub(crate) struct Rref<T> {
    /// Column of the pivot in each non-zero row.
    pub pivots: Vec<usize>,
    /// Non-pivot columns.
    pub free: Vec<usize>,
    /// Reduced coefficient rows (only the first `pivots.len()` are non-zero).
    pub rows: Vec<Vec<T>>,
    /// Reduced right-hand sides, one vector per row.
    pub rhs: Vec<Vec<T>>,
}

pub(crate) fn rref<T: Real>(a: &[Vec<T>], rhs: &[Vec<T>], tol: T) -> Rref<T> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    let mut b = rhs.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let piv = (r..nrows).max_by(|&i, &j| rows[i][col].abs().partial_cmp(&rows[j][col].abs()).unwrap()).unwrap();
        if rows[piv][col].abs() <= tol {
            continue;
        }
        rows.swap(r, piv);
        b.swap(r, piv);
        let d = rows[r][col];
        for v in rows[r].iter_mut() {
            *v /= d;
        }
        for v in b[r].iter_mut() {
            *v /= d;
        }
        for i in 0..nrows {
            if i == r {
                continue;
            }
            let f = rows[i][col];
            if f == T::zero() {
                continue;
            }
            for c in 0..ncols {
                let x = rows[r][c];
                rows[i][c] -= f * x;
            }
            for k in 0..b[i].len() {
                let x = b[r][k];
                b[i][k] -= f * x;
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    Rref { pivots, free, rows, rhs: b }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalises_symmetric_matrix() {
        let a = vec![vec![4.0, 1.0, -2.0], vec![1.0, 2.0, 0.5], vec![-2.0, 0.5, 3.0]];
        let (vals, vecs) = sym_eigen(&a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * vecs[j][k]).sum();
                assert!((av - vals[k] * vecs[i][k]).abs() < 1e-12);
            }
        }
        let tr: f64 = vals.iter().sum();
        assert!((tr - 9.0).abs() < 1e-12);
    }

    #[test]
    fn solvers_agree() {
        let a: Vec<Vec<f64>> = vec![vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]];
        let b = [1.0, 2.0, 3.0];
        let x = cholesky_solve(&a, &b).unwrap();
        let y = spd_solve(&a, &b).unwrap();
        for i in 0..3 {
            assert!((x[i] - y[i]).abs() < 1e-14);
            let r: f64 = (0..3).map(|j| a[i][j] * x[j]).sum();
            assert!((r - b[i]).abs() < 1e-14);
        }
        assert!(cholesky_solve(&[vec![1.0, 2.0], vec![2.0, 1.0]], &[1.0, 1.0]).is_none());
        // singular PSD system: minimum-norm solution on the range
        let s = spd_solve(&[vec![1.0f64, 1.0], vec![1.0, 1.0]], &[2.0, 2.0]).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rref_finds_rank_and_free_columns() {
        let a: Vec<Vec<f64>> = vec![
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
        ];
        let rhs = vec![vec![0.5], vec![0.5], vec![0.3], vec![0.7]];
        let r = rref(&a, &rhs, 1e-12);
        assert_eq!(r.pivots.len(), 3);
        assert_eq!(r.free.len(), 1);
        // last row is the consistency condition
        assert!(r.rhs[3][0].abs() < 1e-14);
    }
}
