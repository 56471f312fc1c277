//! Splitting lemma: f = Σ uᵢxᵢ² + g(x_{r+1}, …, xₙ) after a change of
//! coordinates, with g ∈ m³.

use crate::chart::{ChartError, CoordinateChange};
use crate::field::Elem;
use crate::linalg::{self, Matrix};
use crate::series::{Monomial, Order, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("order must be at least 2, found {0}")]
    OrderBelowTwo(u32),
    #[error("splitting needs a nonzero quadratic part")]
    NoQuadraticPart,
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn check_order(f: &Series) -> Result<(), SplitError> {
    match f.order() {
        Order::Finite(k) if k < 2 => Err(SplitError::OrderBelowTwo(k)),
        _ => Ok(()),
    }
}

/// Symmetric matrix of the quadratic part: G[i][i] = coeff(xᵢ²),
/// G[i][j] = coeff(xᵢxⱼ)/2.
pub fn gram_matrix(f: &Series) -> Result<Matrix, SplitError> {
    check_order(f)?;
    let n = f.nvars();
    let field = f.field();
    let half = field.from_i64(2).inv().expect("odd characteristic");
    let mut g = vec![vec![field.zero(); n]; n];
    for (m, c) in f.terms().iter().filter(|(m, _)| m.degree() == 2) {
        let idx: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        match idx[..] {
            [i] => g[i][i] = c.clone(),
            [i, j] => {
                let h = c * &half;
                g[i][j] = h.clone();
                g[j][i] = h;
            }
            _ => unreachable!("degree-2 monomial"),
        }
    }
    Ok(g)
}

/// Congruence diagonalization: returns (P, D) with Pᵀ·G·P = D and the
/// nonzero diagonal entries of D first.
///
/// Columns of P are the new basis vectors. At each step the lowest-index
/// nonzero diagonal entry of the active block is the pivot; when the
/// diagonal vanishes but g_ij ≠ 0 (i < j, lowest pair), eᵢ ← eᵢ + eⱼ makes
/// g_ii = 2g_ij a pivot.
pub fn diagonalize_symmetric(g: &Matrix) -> (Matrix, Matrix) {
    let n = g.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let one = g[0][0].one_like();
    let mut a = g.clone();
    let mut p = linalg::identity(&one, n);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero()).or_else(|| {
            let (i, j) = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())?;
            add_basis(&mut a, &mut p, i, j, &one);
            Some(i)
        });
        let Some(i) = pivot else { break };
        swap_basis(&mut a, &mut p, k, i);
        let inv = a[k][k].inv().expect("nonzero pivot");
        for j in k + 1..n {
            if !a[k][j].is_zero() {
                let c = -(&a[k][j] * &inv);
                add_basis(&mut a, &mut p, j, k, &c);
            }
        }
    }
    (p, a)
}

// eᵢ ← eᵢ + c·eⱼ, as a congruence on `a` and a column operation on `p`.
fn add_basis(a: &mut Matrix, p: &mut Matrix, i: usize, j: usize, c: &Elem) {
    let n = a.len();
    for r in 0..n {
        let t = c * &a[r][j];
        a[r][i] = &a[r][i] + &t;
    }
    for col in 0..n {
        let t = c * &a[j][col];
        a[i][col] = &a[i][col] + &t;
    }
    for row in p.iter_mut() {
        let t = c * &row[j];
        row[i] = &row[i] + &t;
    }
}

fn swap_basis(a: &mut Matrix, p: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in p.iter_mut() {
        row.swap(i, j);
    }
}

pub fn corank(f: &Series) -> Result<usize, SplitError> {
    let g = gram_matrix(f)?;
    Ok(f.nvars() - linalg::rank(&g))
}

#[derive(Debug, Clone)]
pub struct SplitResult {
    pub rank: usize,
    /// u₁..u_r: the coefficients of x₁²..x_r².
    pub units: Vec<Elem>,
    pub change: CoordinateChange,
    /// Supported on x_{r+1}..xₙ, order ≥ 3 (or zero).
    pub residual: Series,
}

impl SplitResult {
    /// Σ uᵢxᵢ² at the residual's precision.
    pub fn square_part(&self) -> Series {
        let r = &self.residual;
        Series::from_terms(
            r.field(),
            r.nvars(),
            r.precision(),
            self.units.iter().enumerate().map(|(i, u)| (Monomial::var_pow(i, 2), u.clone())),
        )
    }

    /// Σ uᵢxᵢ² + residual, which `apply(change, f)` must equal.
    pub fn reconstruction(&self) -> Series {
        self.square_part().add(&self.residual).expect("same ring")
    }
}

/// Splitting lemma. The square variables come first: after the change,
/// f ≡ Σ_{i<r} uᵢxᵢ² + residual(x_r, …) mod m^{N+1}.
pub fn split(f: &Series) -> Result<SplitResult, SplitError> {
    check_order(f)?;
    let n = f.nvars();
    let prec = f.precision();
    let field = f.field();
    let g = gram_matrix(f)?;
    let (p, d) = diagonalize_symmetric(&g);
    let r = (0..n).take_while(|&i| !d[i][i].is_zero()).count();
    if r == 0 {
        return Err(SplitError::NoQuadraticPart);
    }
    let units: Vec<Elem> = (0..r).map(|i| d[i][i].clone()).collect();
    let mut change = CoordinateChange::linear(field, &p, prec)?;
    let mut h = change.apply(f)?;
    let two_inv: Vec<Elem> = units.iter().map(|u| (u + u).inv().expect("unit")).collect();
    // Each pass: write h − Σuᵢxᵢ² − h|_{corank} = Σᵢ xᵢBᵢ (each monomial goes
    // to its lowest square variable) and shift xᵢ ↦ xᵢ − Bᵢ/(2uᵢ). The
    // leftover cross terms at least double their order per pass.
    for _ in 0..=prec {
        let mut b: Vec<Vec<(Monomial, Elem)>> = vec![Vec::new(); r];
        for (m, c) in h.terms() {
            let Some(i) = (0..r).find(|&i| m.exp(i) > 0) else { continue };
            if *m == Monomial::var_pow(i, 2) {
                continue;
            }
            b[i].push((Monomial::var(i).quotient_of(m), c * &two_inv[i]));
        }
        if b.iter().all(|v| v.is_empty()) {
            break;
        }
        let tau: Vec<Series> = (0..n)
            .map(|i| {
                let x = Series::var(field, n, prec, i);
                if i < r {
                    x.sub(&Series::from_terms(field, n, prec, b[i].clone())).expect("same ring")
                } else {
                    x
                }
            })
            .collect();
        let tau = CoordinateChange::new(tau)?;
        h = tau.apply(&h)?;
        change = CoordinateChange::compose(&change, &tau)?;
    }
    let residual = h.filter(|m| (0..r).all(|i| m.exp(i) == 0));
    debug_assert_eq!(h.sub(&residual).unwrap().num_terms(), r);
    Ok(SplitResult { rank: r, units, change, residual })
}
