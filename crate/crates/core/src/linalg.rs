//! Exact dense linear algebra over a field.

use crate::univariate::Field;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<F: Field>(m: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..m[i].len() {
                    let d = f.clone() * m[r][k].clone();
                    m[i][k] = m[i][k].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(a: &[Vec<F>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    rref(&mut m, cols).len()
}

/// A solution of `a x = b` with free variables set to zero.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// A vector `y` with `y^T a = 0` and `y^T b = 1`; exists exactly when
/// `a x = b` is inconsistent.
pub fn infeasibility_certificate<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut t: Vec<Vec<F>> = (0..cols).map(|c| (0..rows).map(|r| a[r][c].clone()).collect()).collect();
    t.push(b.to_vec());
    let mut rhs = vec![F::zero(); cols];
    rhs.push(F::one());
    solve(&t, &rhs)
}

/// A non-zero vector `x` with `a x = 0`, if one exists.
pub fn nullspace_vector<F: Field>(a: &[Vec<F>], cols: usize) -> Option<Vec<F>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, cols);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![F::zero(); cols];
    x[free] = F::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free].clone();
    }
    Some(x)
}
