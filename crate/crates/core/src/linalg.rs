//! Exact elimination over [`QScalar`].

use crate::matrix::QMatrix;
use crate::scalars::{QScalar, ScalarError};

/// Rank by fraction-free elimination (no inverses, so radical sums are fine).
pub fn rank(m: &QMatrix) -> usize {
    let mut rows: Vec<Vec<QScalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            let a = rows[i][c].clone();
            if a.is_zero() {
                continue;
            }
            for j in c..cols {
                rows[i][j] = pivot.mul(&rows[i][j]).sub(&a.mul(&rows[r][j]));
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Reduced row echelon form; every pivot must be a single-term scalar.
pub fn rref(m: &QMatrix) -> Result<(Vec<Vec<QScalar>>, Vec<usize>), ScalarError> {
    let mut rows: Vec<Vec<QScalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv()?;
        for j in c..cols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let a = rows[i][c].clone();
            for j in c..cols {
                if !rows[r][j].is_zero() {
                    rows[i][j] = rows[i][j].sub(&a.mul(&rows[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Ok((rows, pivots))
}

/// Basis of the right kernel, one vector per free column, with a 1 in that
/// column.
pub fn kernel(m: &QMatrix) -> Result<Vec<Vec<QScalar>>, ScalarError> {
    let (rows, pivots) = rref(m)?;
    let cols = m.cols();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![QScalar::zero(); cols];
        v[free] = QScalar::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = row[free].neg();
        }
        out.push(v);
    }
    Ok(out)
}

/// Solves `sum_i c_i columns[i] = target` when a solution exists.
pub fn solve_combination(
    columns: &[Vec<QScalar>],
    target: &[QScalar],
) -> Result<Option<Vec<QScalar>>, ScalarError> {
    let n = columns.len();
    let len = target.len();
    let aug = QMatrix::from_fn(len, n + 1, |i, j| {
        if j < n {
            columns[j][i].clone()
        } else {
            target[i].clone()
        }
    });
    let (rows, pivots) = rref(&aug)?;
    if pivots.contains(&n) {
        return Ok(None);
    }
    let mut c = vec![QScalar::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        c[p] = row[n].clone();
    }
    Ok(Some(c))
}
