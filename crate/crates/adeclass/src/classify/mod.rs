//! ADE classification with certificates.
//!
//! [`classify`] runs: order guards → splitting lemma → residual analysis on
//! the corank variables (Aₖ by unit factoring, Dₖ by degree-wise cleanup,
//! E by a weighted Newton finisher) → normalization of the square part.
//! Every definite verdict comes with a [`Certificate`] checked by
//! [`verify_certificate`] using nothing but substitution and multiplication.
//!
//! Normal forms use the variable layout of the standard table: the residual
//! variables are x₁ (and x₂), followed by the squares:
//!
//! | verdict      | normal form (plus x₃² + … or x₂² + …) |
//! |--------------|-------------------------------------|
//! | A(k)         | x₁^{k+1}                            |
//! | D(k)         | x₁x₂² + x₁^{k−1}                    |
//! | E6 / E6_1    | x₁³ + x₂⁴ (+ x₁²x₂², char 3)        |
//! | E7 / E7_1    | x₁³ + x₁x₂³ (+ x₁²x₂², char 3)      |
//! | E8           | x₁³ + x₂⁵                           |
//! | E8_1Char3    | x₁³ + x₂⁵ + x₁²x₂³                  |
//! | E8_2Char3    | x₁³ + x₂⁵ + x₁²x₂²                  |
//! | E8_1Char5    | x₁³ + x₂⁵ + x₁x₂⁴                   |

mod finish;
mod normalizer;
mod quadform;
mod residual;

pub use quadform::isometry_to_scalar;
pub use residual::{
    a_k_loop, binary_cubic_discriminant, d_reduce, e_classify, e_normalize, ideal_cube_membership, jet3_normal_form,
    ECoefficients, Jet3, JetType,
};

use crate::chart::{ChartError, CoordinateChange};
use crate::field::{Elem, FieldSpec};
use crate::series::{Monomial, Order, Series, SeriesError};
use crate::split::{split, SplitError};
use normalizer::Normalizer;
use residual::ResidualForm;
use std::fmt;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Regular,
    A(u32),
    /// Aₖ′ for some k′ ≥ k, or A_∞: the truncation cannot tell.
    AAtLeast(u32),
    D(u32),
    DAtLeast(u32),
    E6,
    E6_1,
    E7,
    E7_1,
    E8,
    E8_1Char3,
    E8_2Char3,
    E8_1Char5,
    NotSimple(NotSimpleReason),
    Undetermined(UndeterminedReason),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NotSimpleReason {
    /// ord(f) ≥ 4 (including f ≡ 0 mod m^{N+1} with N ≥ 3).
    OrderAtLeastFour,
    /// ord(f) = 3 in three or more variables.
    OrderThreeInHigherDimension,
    CorankAtLeastThree,
    /// Corank 2 with residual of order ≥ 4.
    ResidualOrderAtLeastFour,
    /// Triple-line jet and f ∈ ⟨x₁, x₂²⟩³ modulo m^{N+1}.
    InIdealCube,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UndeterminedReason {
    /// A square (or higher) root needed for the normal form is missing.
    RootNotInField(String),
    /// The verdict would rely on κ being algebraically closed; set the
    /// field's closure flag to accept that hypothesis.
    NeedsClosedField(String),
    /// The precision is too small to decide anything.
    PrecisionTooLow,
    /// The normalization did not reach the normal form (no certificate).
    Stalled(String),
}

impl Verdict {
    /// Stable machine-readable name.
    pub fn label(&self) -> String {
        match self {
            Verdict::Regular => "Regular".into(),
            Verdict::A(k) => format!("A{k}"),
            Verdict::AAtLeast(k) => format!("A_at_least({k})"),
            Verdict::D(k) => format!("D{k}"),
            Verdict::DAtLeast(k) => format!("D_at_least({k})"),
            Verdict::E6 => "E6".into(),
            Verdict::E6_1 => "E6_1".into(),
            Verdict::E7 => "E7".into(),
            Verdict::E7_1 => "E7_1".into(),
            Verdict::E8 => "E8".into(),
            Verdict::E8_1Char3 => "E8_1_char3".into(),
            Verdict::E8_2Char3 => "E8_2_char3".into(),
            Verdict::E8_1Char5 => "E8_1_char5".into(),
            Verdict::NotSimple(_) => "NotSimple".into(),
            Verdict::Undetermined(_) => "Undetermined".into(),
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, Verdict::Undetermined(_))
    }

    /// ADE verdicts (including Regular and the at-least forms) carry certificates.
    pub fn has_normal_form(&self) -> bool {
        !matches!(self, Verdict::NotSimple(_) | Verdict::Undetermined(_))
    }

    /// The characteristic this verdict is restricted to, if any.
    pub fn required_characteristic(&self) -> Option<u64> {
        match self {
            Verdict::E6_1 | Verdict::E7_1 | Verdict::E8_1Char3 | Verdict::E8_2Char3 => Some(3),
            Verdict::E8_1Char5 => Some(5),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotSimple(r) => write!(f, "NotSimple({})", r.code()),
            Verdict::Undetermined(r) => write!(f, "Undetermined({})", r.code()),
            v => f.write_str(&v.label()),
        }
    }
}

impl NotSimpleReason {
    pub fn code(&self) -> &'static str {
        match self {
            NotSimpleReason::OrderAtLeastFour => "order_at_least_4",
            NotSimpleReason::OrderThreeInHigherDimension => "order_3_in_dimension_above_2",
            NotSimpleReason::CorankAtLeastThree => "corank_at_least_3",
            NotSimpleReason::ResidualOrderAtLeastFour => "residual_order_at_least_4",
            NotSimpleReason::InIdealCube => "in_ideal_cube",
        }
    }
}

impl UndeterminedReason {
    pub fn code(&self) -> &'static str {
        match self {
            UndeterminedReason::RootNotInField(_) => "root_not_in_field",
            UndeterminedReason::NeedsClosedField(_) => "needs_closed_field",
            UndeterminedReason::PrecisionTooLow => "precision_too_low",
            UndeterminedReason::Stalled(_) => "stalled",
        }
    }

    pub fn detail(&self) -> Option<&str> {
        match self {
            UndeterminedReason::RootNotInField(s) | UndeterminedReason::NeedsClosedField(s) | UndeterminedReason::Stalled(s) => {
                Some(s)
            }
            UndeterminedReason::PrecisionTooLow => None,
        }
    }
}

/// Witness that f ⟲ normal_form: `unit · normal_form(change) ≡ f mod m^{N+1}`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    pub normal_form: Series,
    pub change: CoordinateChange,
    pub unit: Series,
    pub precision: u32,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
}

impl Classification {
    fn bare(verdict: Verdict) -> Self {
        Classification { verdict, certificate: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("input is a unit (not in the maximal ideal)")]
    NotInMaximalIdeal,
    #[error("expected {expected} variables, found {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("cubic jet does not split into linear factors over the field")]
    CubicRootsNotInField,
    #[error("expected order {expected}, found {found:?}")]
    WrongOrder { expected: u32, found: Order },
    #[error("{0}")]
    Unsupported(String),
}

/// Internal short-circuit: either a final non-ADE verdict or an error.
#[derive(Debug, Clone)]
pub(crate) enum Fail {
    Verdict(Verdict),
}

impl Fail {
    pub fn root(what: impl Into<String>) -> Self {
        Fail::Verdict(Verdict::Undetermined(UndeterminedReason::RootNotInField(what.into())))
    }
    pub fn stalled(what: impl Into<String>) -> Self {
        Fail::Verdict(Verdict::Undetermined(UndeterminedReason::Stalled(what.into())))
    }
    pub fn internal(what: impl Into<String>) -> Self {
        Self::stalled(format!("internal: {}", what.into()))
    }
    pub fn not_simple(r: NotSimpleReason) -> Self {
        Fail::Verdict(Verdict::NotSimple(r))
    }
}

impl From<SeriesError> for Fail {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::RootNotInField(s) => Fail::root(s),
            e => Fail::internal(e.to_string()),
        }
    }
}

impl From<ChartError> for Fail {
    fn from(e: ChartError) -> Self {
        Fail::internal(e.to_string())
    }
}

impl From<SplitError> for Fail {
    fn from(e: SplitError) -> Self {
        Fail::internal(e.to_string())
    }
}

/// The table's normal form for `verdict` in n variables, truncated at N.
/// `None` for NotSimple/Undetermined, and for forms that need more
/// variables than n.
pub fn normal_form(verdict: &Verdict, field: FieldSpec, n: usize, prec: u32) -> Option<Series> {
    let mono = |e: &[u32]| {
        let mut v = e.to_vec();
        v.resize(n, 0);
        Monomial::new(&v)
    };
    if matches!(verdict, Verdict::D(k) if *k < 4) {
        return None;
    }
    let (core, k): (Vec<Monomial>, usize) = match verdict {
        Verdict::Regular => return (n >= 1).then(|| Series::var(field, n, prec, 0)),
        Verdict::A(k) => (vec![mono(&[k + 1])], 1),
        Verdict::AAtLeast(_) => (vec![], 1),
        Verdict::D(k) => (vec![mono(&[1, 2]), mono(&[k - 1])], 2),
        Verdict::DAtLeast(_) => (vec![mono(&[1, 2])], 2),
        Verdict::E6 => (vec![mono(&[3]), mono(&[0, 4])], 2),
        Verdict::E6_1 => (vec![mono(&[3]), mono(&[0, 4]), mono(&[2, 2])], 2),
        Verdict::E7 => (vec![mono(&[3]), mono(&[1, 3])], 2),
        Verdict::E7_1 => (vec![mono(&[3]), mono(&[1, 3]), mono(&[2, 2])], 2),
        Verdict::E8 => (vec![mono(&[3]), mono(&[0, 5])], 2),
        Verdict::E8_1Char3 => (vec![mono(&[3]), mono(&[0, 5]), mono(&[2, 3])], 2),
        Verdict::E8_2Char3 => (vec![mono(&[3]), mono(&[0, 5]), mono(&[2, 2])], 2),
        Verdict::E8_1Char5 => (vec![mono(&[3]), mono(&[0, 5]), mono(&[1, 4])], 2),
        Verdict::NotSimple(_) | Verdict::Undetermined(_) => return None,
    };
    if n < k {
        return None;
    }
    let squares = (k..n).map(|i| Monomial::var_pow(i, 2));
    let terms = core.into_iter().chain(squares).map(|m| (m, field.one()));
    Some(Series::from_terms(field, n, prec, terms))
}

/// Exact check of `unit · normal_form(change) ≡ f mod m^{N+1}` together with
/// the structural conditions (unit is a unit, normal form has 0/1
/// coefficients, same ring as f).
pub fn verify_certificate(f: &Series, cert: &Certificate) -> bool {
    let (n, prec, field) = (f.nvars(), f.precision(), f.field());
    let same_ring = |s: &Series| s.nvars() == n && s.field() == field && s.precision() >= prec;
    if cert.precision != prec || !same_ring(&cert.normal_form) || !same_ring(&cert.unit) || cert.change.nvars() != n {
        return false;
    }
    if !cert.change.components().iter().all(same_ring) {
        return false;
    }
    if CoordinateChange::new(cert.change.components().to_vec()).is_err() {
        return false;
    }
    if !cert.unit.is_unit() || !cert.normal_form.terms().iter().all(|(_, c)| c.is_one()) {
        return false;
    }
    let Ok(h) = cert.change.apply(&cert.normal_form.truncate(prec)) else { return false };
    let Ok(lhs) = h.truncate(prec).mul(&cert.unit.truncate(prec)) else { return false };
    lhs == *f
}

/// Classify f ∈ m and, for ADE verdicts, return a certificate. The field
/// is taken without the algebraically-closed assumption; see
/// [`classify_over`].
pub fn classify(f: &Series) -> Result<Classification, ClassifyError> {
    classify_over(f, f.field())
}

/// As [`classify`], with `field` carrying the algebraically-closed flag
/// (series themselves never carry it). The flag turns the order-3 and
/// corank ≥ 3 guards from Undetermined into NotSimple.
pub fn classify_over(f: &Series, field: FieldSpec) -> Result<Classification, ClassifyError> {
    let n = f.nvars();
    if n == 0 {
        return Err(ClassifyError::Unsupported("no variables".into()));
    }
    if field.characteristic() != f.field().characteristic() {
        return Err(ClassifyError::Unsupported(format!("series over {} classified over {field}", f.field())));
    }
    let prec = f.precision();
    let order = f.order();
    if order == Order::Finite(0) {
        return Err(ClassifyError::NotInMaximalIdeal);
    }
    let closed = field.algebraically_closed_assumed();
    let out = match order {
        Order::Finite(1) => Ok(regular_certificate(f)),
        _ if n == 1 => one_variable(f),
        Order::AbovePrecision if prec < 3 => Err(Fail::Verdict(Verdict::Undetermined(UndeterminedReason::PrecisionTooLow))),
        Order::AbovePrecision => Err(Fail::not_simple(NotSimpleReason::OrderAtLeastFour)),
        Order::Finite(k) if k >= 4 => Err(Fail::not_simple(NotSimpleReason::OrderAtLeastFour)),
        Order::Finite(3) if n == 2 => residual::corank_two(f).and_then(|r| assemble(f, None, r)),
        Order::Finite(3) if closed => Err(Fail::not_simple(NotSimpleReason::OrderThreeInHigherDimension)),
        Order::Finite(3) => Err(Fail::Verdict(Verdict::Undetermined(UndeterminedReason::NeedsClosedField(
            "order 3 in more than two variables".into(),
        )))),
        _ => order_two(f, closed),
    };
    let cls = match out {
        Ok(c) => c,
        Err(Fail::Verdict(v)) => Classification::bare(v),
    };
    if let Some(p) = cls.verdict.required_characteristic() {
        assert_eq!(p, field.characteristic(), "characteristic-gated verdict outside its characteristic");
    }
    Ok(cls)
}

fn regular_certificate(f: &Series) -> Classification {
    let (field, n, prec) = (f.field(), f.nvars(), f.precision());
    let pivot = (0..n).find(|&i| !f.coeff(&Monomial::var(i)).is_zero()).expect("order 1");
    let mut comps = vec![f.clone()];
    comps.extend((0..n).filter(|&i| i != pivot).map(|i| Series::var(field, n, prec, i)));
    let change = CoordinateChange::new(comps).expect("invertible by choice of pivot");
    let normal_form = normal_form(&Verdict::Regular, field, n, prec).expect("n ≥ 1");
    let cert = Certificate { verdict: Verdict::Regular, normal_form, change, unit: Series::one(field, n, prec), precision: prec };
    Classification { verdict: Verdict::Regular, certificate: Some(cert) }
}

fn one_variable(f: &Series) -> Result<Classification, Fail> {
    let r = residual::a_residual(f)?;
    assemble(f, None, r)
}

fn order_two(f: &Series, closed: bool) -> Result<Classification, Fail> {
    let n = f.nvars();
    let sr = split(f)?;
    let k = n - sr.rank;
    let res = match k {
        0 => None,
        1 => Some(residual::a_residual(&project(&sr.residual, sr.rank))?),
        2 => Some(residual::corank_two(&project(&sr.residual, sr.rank))?),
        _ if closed => return Err(Fail::not_simple(NotSimpleReason::CorankAtLeastThree)),
        _ => {
            return Err(Fail::Verdict(Verdict::Undetermined(UndeterminedReason::NeedsClosedField(format!(
                "corank {k}"
            )))))
        }
    };
    assemble(f, Some(&sr), res.unwrap_or_else(|| ResidualForm::empty(f.field(), f.precision())))
}

/// Restrict a series supported on x_{from}, …, xₙ to those variables.
fn project(g: &Series, from: usize) -> Series {
    let n = g.nvars();
    let k = n - from;
    let terms = g.terms().iter().map(|(m, c)| {
        let e: Vec<u32> = (from..n).map(|i| m.exp(i)).collect();
        (Monomial::new(&e), c.clone())
    });
    Series::from_terms(g.field(), k, g.precision(), terms)
}

/// Put the split square part and the normalized residual together:
/// f∘C = Σuᵢxᵢ² + g, g∘D = V·h. Returns the full certificate.
fn assemble(f: &Series, sr: Option<&crate::split::SplitResult>, res: ResidualForm) -> Result<Classification, Fail> {
    let (field, n, prec) = (f.field(), f.nvars(), f.precision());
    let r = sr.map_or(0, |s| s.rank);
    let k = n - r;
    debug_assert_eq!(res.h.nvars(), k);
    let emb: Vec<usize> = (r..n).collect();
    let mut st = Normalizer::new(f);
    if let Some(sr) = sr {
        st.substitute(&sr.change)?;
    }
    if k > 0 && !res.psi.is_identity() {
        let comps = (0..n)
            .map(|i| if i < r { Series::var(field, n, prec, i) } else { res.psi.components()[i - r].embed(n, &emb) })
            .collect();
        st.substitute_components(comps)?;
    }
    // cur = Σuᵢxᵢ² + V·h
    let v = if k > 0 { res.unit.embed(n, &emb) } else { Series::one(field, n, prec) };
    let v0 = v.constant_term();
    let v_rel = v.scale(&v0.inv().expect("unit"));
    if r > 0 && v_rel.terms().iter().any(|(m, _)| m.degree() > 0) {
        let s = v_rel.sqrt_with_root(&field.one())?;
        let comps = (0..n)
            .map(|i| {
                let x = Series::var(field, n, prec, i);
                if i < r {
                    x.mul(&s).expect("same ring")
                } else {
                    x
                }
            })
            .collect();
        st.substitute_components(comps)?;
    }
    st.divide(&v_rel)?;
    // cur = Σuᵢxᵢ² + v0·h; find S (on h) and T (on the squares) with
    // h∘S = c·h and (Σuᵢxᵢ²)∘T = v0·c·Σxᵢ².
    let units: Vec<Elem> = sr.map_or_else(Vec::new, |s| s.units.clone());
    let (lin, lambda) = scaling_and_isometry(&units, &v0, &res, n).ok_or_else(|| Fail::root("square part"))?;
    st.substitute(&CoordinateChange::linear(field, &lin, prec)?)?;
    st.divide_const(&lambda)?;
    // table layout: residual variables first
    let perm = (0..n)
        .map(|i| {
            let j = if i < r { i + k } else { i - r };
            Series::var(field, n, prec, j)
        })
        .collect();
    st.substitute_components(perm)?;
    let h = normal_form(&res.verdict, field, n, prec).ok_or_else(|| Fail::internal("no normal form"))?;
    let cert = st.certificate(res.verdict.clone(), h)?;
    debug_assert!(verify_certificate(f, &cert));
    Ok(Classification { verdict: res.verdict, certificate: Some(cert) })
}

fn scaling_and_isometry(units: &[Elem], v0: &Elem, res: &ResidualForm, n: usize) -> Option<(Vec<Vec<Elem>>, Elem)> {
    let field = v0.field();
    let r = units.len();
    let k = n - r;
    let mut cands = vec![field.one(), -field.one()];
    if let Some(u1) = units.first() {
        cands.push(u1.div(v0).expect("unit"));
    }
    cands.extend(field.nonsquare());
    cands.push(v0.clone());
    cands.push(v0.inv().expect("unit"));
    let mut seen: Vec<Elem> = Vec::new();
    for t in cands {
        if seen.contains(&t) {
            continue;
        }
        seen.push(t.clone());
        let Some(c) = res.scales_by(&t) else { continue };
        let lambda = v0 * &c;
        let Some(iso) = quadform::isometry_to_scalar(units, &lambda) else { continue };
        let mut m = vec![vec![field.zero(); n]; n];
        for i in 0..r {
            for j in 0..r {
                m[i][j] = iso[i][j].clone();
            }
        }
        for j in 0..k {
            m[r + j][r + j] = t.pow(res.weights[j] as u64);
        }
        return Some((m, lambda));
    }
    None
}
