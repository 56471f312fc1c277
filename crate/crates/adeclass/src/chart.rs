//! Coordinate changes of the maximal ideal.
//!
//! A change is an n-tuple (φ₁, …, φₙ) of series in m whose linear parts form
//! an invertible matrix, i.e. a new minimal generating set of m. Applying a
//! change to f means substituting: `apply(φ, f) = f(φ₁, …, φₙ)`.

use crate::field::{Elem, FieldSpec};
use crate::linalg::{self, Matrix};
use crate::series::{Monomial, Series, SeriesError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("component {0} is not in the maximal ideal")]
    NotInMaximalIdeal(usize),
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("expected {expected} components in {expected} variables")]
    Shape { expected: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoordinateChange {
    components: Vec<Series>,
}

impl CoordinateChange {
    pub fn new(components: Vec<Series>) -> Result<Self, ChartError> {
        let n = components.len();
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != n {
                return Err(ChartError::Shape { expected: n });
            }
            if !c.constant_term().is_zero() {
                return Err(ChartError::NotInMaximalIdeal(i));
            }
        }
        let ch = CoordinateChange { components };
        if n > 0 && linalg::inverse(&ch.linear_part()).is_none() {
            return Err(ChartError::SingularLinearPart);
        }
        Ok(ch)
    }

    pub fn identity(field: FieldSpec, n: usize, prec: u32) -> Self {
        CoordinateChange { components: (0..n).map(|i| Series::var(field, n, prec, i)).collect() }
    }

    /// xᵢ ↦ Σⱼ m[i][j]·xⱼ.
    pub fn linear(field: FieldSpec, m: &Matrix, prec: u32) -> Result<Self, ChartError> {
        let n = m.len();
        let comps = m
            .iter()
            .map(|row| Series::from_terms(field, n, prec, row.iter().enumerate().map(|(j, c)| (Monomial::var(j), c.clone()))))
            .collect();
        CoordinateChange::new(comps)
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Series> {
        self.components
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn precision(&self) -> u32 {
        self.components.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    pub fn field(&self) -> FieldSpec {
        self.components[0].field()
    }

    /// Row i holds the linear coefficients of component i.
    pub fn linear_part(&self) -> Matrix {
        let n = self.nvars();
        self.components.iter().map(|c| (0..n).map(|j| c.coeff(&Monomial::var(j))).collect()).collect()
    }

    pub fn apply(&self, f: &Series) -> Result<Series, ChartError> {
        if f.nvars() != self.nvars() {
            return Err(SeriesError::VarCountMismatch(f.nvars(), self.nvars()).into());
        }
        Ok(f.substitute(&self.components)?)
    }

    /// The change with components outerᵢ(inner), so that
    /// `apply(compose(o, i), f) = apply(i, apply(o, f))`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, ChartError> {
        if outer.nvars() != inner.nvars() {
            return Err(SeriesError::VarCountMismatch(outer.nvars(), inner.nvars()).into());
        }
        let comps = outer.components.iter().map(|c| c.substitute(&inner.components)).collect::<Result<Vec<_>, _>>()?;
        Ok(CoordinateChange { components: comps })
    }

    pub fn then(&self, inner: &Self) -> Result<Self, ChartError> {
        Self::compose(self, inner)
    }

    /// Degree-by-degree inverse: with φ = L·x + Q(x), the inverse ψ solves
    /// ψ = L⁻¹(x − Q(ψ)); iteration P fixes the degree-P part, and is run at
    /// precision P only.
    pub fn inverse(&self) -> Self {
        let n = self.nvars();
        let prec = self.precision();
        let field = self.field();
        let linv = linalg::inverse(&self.linear_part()).expect("invertible by construction");
        let nonlinear: Vec<Series> = self.components.iter().map(|c| c.filter(|m| m.degree() >= 2)).collect();
        let lin_inv_of = |rhs: &[Series], p: u32| -> Vec<Series> {
            (0..n)
                .map(|i| {
                    let mut acc = Series::zero(field, n, p);
                    for (j, r) in rhs.iter().enumerate() {
                        if !linv[i][j].is_zero() {
                            acc = acc.add(&r.scale(&linv[i][j]).truncate(p)).expect("same shape");
                        }
                    }
                    acc
                })
                .collect()
        };
        let xs: Vec<Series> = (0..n).map(|i| Series::var(field, n, prec, i)).collect();
        let mut psi = lin_inv_of(&xs, 1.min(prec));
        for p in 2..=prec {
            let args: Vec<Series> = psi.iter().map(|s| s.with_precision(p)).collect();
            let rhs: Vec<Series> = (0..n)
                .map(|i| {
                    let q = nonlinear[i].truncate(p).substitute(&args).expect("args in m");
                    xs[i].truncate(p).sub(&q).expect("same shape")
                })
                .collect();
            psi = lin_inv_of(&rhs, p);
        }
        let components = psi.into_iter().map(|s| s.with_precision(prec)).collect();
        CoordinateChange { components }
    }

    /// Deterministic random change: invertible linear part plus random terms
    /// of degree 2..=max_extra_degree.
    pub fn random(seed: u64, field: FieldSpec, n: usize, prec: u32, max_extra_degree: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_change_with(&mut rng, field, n, prec, max_extra_degree)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.nvars();
        let prec = self.precision();
        let field = self.field();
        self.components.iter().enumerate().all(|(i, c)| *c == Series::var(field, n, prec, i).truncate(c.precision()))
    }

    /// Same change viewed at a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        CoordinateChange { components: self.components.iter().map(|c| c.truncate(prec)).collect() }
    }
}

pub fn random_change(seed: u64, field: FieldSpec, n: usize, prec: u32, max_extra_degree: u32) -> CoordinateChange {
    CoordinateChange::random(seed, field, n, prec, max_extra_degree)
}

pub fn random_change_with<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, n: usize, prec: u32, max_extra_degree: u32) -> CoordinateChange {
    let lin: Matrix = loop {
        let m: Matrix = (0..n).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect();
        if linalg::rank(&m) == n {
            break m;
        }
    };
    let monos = crate::series::monomials_up_to(n, max_extra_degree.min(prec));
    let comps = (0..n)
        .map(|i| {
            let mut terms: Vec<(Monomial, Elem)> = (0..n).map(|j| (Monomial::var(j), lin[i][j].clone())).collect();
            for m in monos.iter().filter(|m| m.degree() >= 2) {
                if rng.gen_bool(0.5) {
                    terms.push((*m, field.random(rng)));
                }
            }
            Series::from_terms(field, n, prec, terms)
        })
        .collect();
    CoordinateChange { components: comps }
}

impl fmt::Debug for CoordinateChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.components.iter().map(|c| c.to_string())).finish()
    }
}
