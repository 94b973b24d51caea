//! Dense exact linear algebra over a number field: reduction, rank,
//! kernels, solving, inversion. Sizes here are small (tens of rows), so
//! plain Gauss-Jordan is enough.

use std::sync::Arc;

use crate::scalars::{FieldElement, NumberField};

pub type Matrix = Vec<Vec<FieldElement>>;

/// In-place Gauss-Jordan reduction; returns the pivot columns in order.
pub fn rref(rows: &mut Matrix) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot entry is nonzero");
        for j in c..n {
            rows[r][j] = &rows[r][j] * &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..n {
                    let delta = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &Matrix) -> usize {
    let mut work = rows.clone();
    rref(&mut work).len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, the free
/// coordinate set to one.
pub fn kernel(rows: &Matrix, ncols: usize, field: &Arc<NumberField>) -> Vec<Vec<FieldElement>> {
    let mut work = rows.clone();
    let pivots = rref(&mut work);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![FieldElement::zero(field); ncols];
        v[free] = FieldElement::one(field);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&work[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Particular solution of `A x = b` with every free variable zero; None
/// when the system is inconsistent.
pub fn solve(
    rows: &Matrix,
    rhs: &[FieldElement],
    ncols: usize,
    field: &Arc<NumberField>,
) -> Option<Vec<FieldElement>> {
    assert_eq!(rows.len(), rhs.len());
    let mut work: Matrix = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![FieldElement::zero(field); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = work[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix; None when singular.
pub fn inverse(mat: &Matrix, field: &Arc<NumberField>) -> Option<Matrix> {
    let n = mat.len();
    let mut work: Matrix = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "inverse needs a square matrix");
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    FieldElement::one(field)
                } else {
                    FieldElement::zero(field)
                });
            }
            r
        })
        .collect();
    let pivots = rref(&mut work);
    if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| k != c) {
        return None;
    }
    Some(
        work.into_iter()
            .map(|row| row[n..].to_vec())
            .collect(),
    )
}
