//! Dense linear algebra over the coefficient field.

use crate::field::Elem;

pub type Matrix = Vec<Vec<Elem>>;

pub fn identity(one: &Elem, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { one.clone() } else { one.zero_like() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let zero = a[0][0].zero_like();
    let mut out = vec![vec![zero; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row-reduce in place; returns pivot columns.
fn row_reduce(a: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].inv().expect("nonzero pivot");
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..a[r].len() {
                    let t = &f * &a[row][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    if a.is_empty() {
        return 0;
    }
    let mut m = a.clone();
    let nc = m[0].len();
    row_reduce(&mut m, nc).len()
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let one = a[0][0].one_like();
    let id = identity(&one, n);
    let mut aug: Matrix = a.iter().zip(&id).map(|(r, e)| r.iter().chain(e).cloned().collect()).collect();
    let piv = row_reduce(&mut aug, n);
    if piv.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One solution x of A·x = b (free variables set to zero), if any.
pub fn solve(a: &Matrix, b: &[Elem], zero: &Elem) -> Option<Vec<Elem>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a.iter().zip(b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
    if aug.is_empty() {
        return Some(vec![zero.clone(); ncols]);
    }
    let piv = row_reduce(&mut aug, ncols);
    // inconsistent row: all-zero coefficients with nonzero rhs
    for r in piv.len()..aug.len() {
        if !aug[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![zero.clone(); ncols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    Some(x)
}
