//! Running state of a normalization: f∘ψ = unit · cur at all times.

use super::{Certificate, Fail, Verdict};
use crate::chart::CoordinateChange;
use crate::field::{Elem, FieldSpec};
use crate::series::Series;

#[derive(Clone)]
pub(crate) struct Normalizer {
    pub psi: CoordinateChange,
    pub unit: Series,
    pub cur: Series,
}

impl Normalizer {
    pub fn new(f: &Series) -> Self {
        let (field, n, prec) = (f.field(), f.nvars(), f.precision());
        Normalizer {
            psi: CoordinateChange::identity(field, n, prec),
            unit: Series::one(field, n, prec),
            cur: f.clone(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.cur.field()
    }

    pub fn nvars(&self) -> usize {
        self.cur.nvars()
    }

    pub fn prec(&self) -> u32 {
        self.cur.precision()
    }

    /// cur ← cur∘τ (and ψ ← ψ∘τ, unit ← unit∘τ).
    pub fn substitute(&mut self, tau: &CoordinateChange) -> Result<(), Fail> {
        self.cur = tau.apply(&self.cur)?;
        if self.unit.terms().iter().any(|(m, _)| m.degree() > 0) {
            self.unit = tau.apply(&self.unit)?;
        }
        self.psi = CoordinateChange::compose(&self.psi, tau)?;
        Ok(())
    }

    pub fn substitute_components(&mut self, comps: Vec<Series>) -> Result<(), Fail> {
        let tau = CoordinateChange::new(comps)?;
        self.substitute(&tau)
    }

    /// cur ← cur / w, unit ← unit · w.
    pub fn divide(&mut self, w: &Series) -> Result<(), Fail> {
        if w.terms().iter().all(|(m, _)| m.degree() == 0) {
            return self.divide_const(&w.constant_term());
        }
        let inv = w.invert_unit()?;
        self.cur = self.cur.mul(&inv)?;
        self.unit = self.unit.mul(w)?;
        Ok(())
    }

    pub fn divide_const(&mut self, c: &Elem) -> Result<(), Fail> {
        let inv = c.inv().ok_or_else(|| Fail::internal("division by zero constant"))?;
        self.cur = self.cur.scale(&inv);
        self.unit = self.unit.scale(c);
        Ok(())
    }

    /// Diagonal scaling xᵢ ↦ sᵢ·xᵢ.
    pub fn scale_vars(&mut self, s: &[Elem]) -> Result<(), Fail> {
        let (field, n, prec) = (self.field(), self.nvars(), self.prec());
        let comps = s.iter().enumerate().map(|(i, c)| Series::var(field, n, prec, i).scale(c)).collect();
        self.substitute_components(comps)
    }

    /// Turn the state into a certificate for `h` (which `cur` must equal):
    /// f = (unit∘ψ⁻¹) · h(ψ⁻¹).
    pub fn certificate(&self, verdict: Verdict, h: Series) -> Result<Certificate, Fail> {
        if self.cur != h {
            return Err(Fail::stalled("normal form not reached"));
        }
        let change = self.psi.inverse();
        let unit = change.apply(&self.unit)?;
        Ok(Certificate { verdict, normal_form: h, change, unit, precision: self.prec() })
    }
}
