//! Normalization of the corank residual g (one or two variables):
//! g∘ψ = V·h with h the table's residual form.

use super::finish::{finish, Modulus};
use super::normalizer::Normalizer;
use super::{assemble, Classification, ClassifyError, Fail, NotSimpleReason, Verdict};
use crate::chart::CoordinateChange;
use crate::field::{poly_roots, Elem, FieldSpec};
use crate::linalg;
use crate::series::{Monomial, Order, Series};

pub(crate) struct ResidualForm {
    pub verdict: Verdict,
    /// Residual normal form in k variables.
    pub h: Series,
    pub psi: CoordinateChange,
    pub unit: Series,
    /// Diagonal scalings xⱼ ↦ t^{wⱼ}xⱼ multiply h by t^d (when h is
    /// weighted-homogeneous; checked exactly in `scales_by`).
    pub weights: Vec<u32>,
    pub d: u32,
}

impl ResidualForm {
    /// No residual variables (corank 0).
    pub fn empty(field: FieldSpec, prec: u32) -> Self {
        ResidualForm {
            verdict: Verdict::A(1),
            h: Series::zero(field, 0, prec),
            psi: CoordinateChange::identity(field, 0, prec),
            unit: Series::one(field, 0, prec),
            weights: vec![],
            d: 1,
        }
    }

    fn from_state(st: &Normalizer, verdict: Verdict, h: Series, weights: Vec<u32>, d: u32) -> Self {
        ResidualForm { verdict, h, psi: st.psi.clone(), unit: st.unit.clone(), weights, d }
    }

    /// c with h(t^{w₁}x₁, …) = c·h, if this scaling is a symmetry up to c.
    pub fn scales_by(&self, t: &Elem) -> Option<Elem> {
        let c = t.pow(self.d as u64);
        let k = self.h.nvars();
        if k == 0 || self.h.is_zero() {
            return Some(c);
        }
        let field = self.h.field();
        let prec = self.h.precision();
        let comps: Vec<Series> =
            (0..k).map(|j| Series::var(field, k, prec, j).scale(&t.pow(self.weights[j] as u64))).collect();
        let scaled = self.h.substitute(&comps).ok()?;
        (scaled == self.h.scale(&c)).then_some(c)
    }
}

// ---------------------------------------------------------------------
// A: one residual variable
// ---------------------------------------------------------------------

pub(crate) fn a_residual(g: &Series) -> Result<ResidualForm, Fail> {
    let (field, prec) = (g.field(), g.precision());
    let st = Normalizer::new(g);
    match g.order() {
        Order::AbovePrecision => Ok(ResidualForm {
            verdict: Verdict::AAtLeast(prec),
            h: Series::zero(field, 1, prec),
            psi: st.psi,
            unit: Series::one(field, 1, prec),
            weights: vec![1],
            d: 1,
        }),
        Order::Finite(m) => {
            // g = x^m · V; V is only determined mod x^{N+1−m}, and the
            // truncated representative is taken as the unit.
            let v = Series::from_terms(
                field,
                1,
                prec,
                g.terms().iter().map(|(e, c)| (Monomial::var_pow(0, e.exp(0) - m), c.clone())),
            );
            let h = Series::monomial(field, 1, prec, Monomial::var_pow(0, m), field.one());
            if m < 2 {
                return Err(Fail::internal("residual of order < 2"));
            }
            Ok(ResidualForm { verdict: Verdict::A(m - 1), h, psi: st.psi, unit: v, weights: vec![1], d: m })
        }
    }
}

/// Aₖ decision for a one-variable residual, with a certificate for the
/// residual itself: residual = u·x^{k+1} → A(k); residual ≡ 0 → A_at_least(N).
pub fn a_k_loop(residual: &Series) -> Result<Classification, ClassifyError> {
    if residual.nvars() != 1 {
        return Err(ClassifyError::VariableCount { expected: 1, found: residual.nvars() });
    }
    if let Order::Finite(k) = residual.order() {
        if k < 2 {
            return Err(ClassifyError::WrongOrder { expected: 2, found: residual.order() });
        }
    }
    Ok(run(residual, a_residual))
}

fn run(g: &Series, path: impl FnOnce(&Series) -> Result<ResidualForm, Fail>) -> Classification {
    match path(g).and_then(|r| assemble(g, None, r)) {
        Ok(c) => c,
        Err(Fail::Verdict(v)) => Classification { verdict: v, certificate: None },
    }
}

// ---------------------------------------------------------------------
// Binary cubics
// ---------------------------------------------------------------------

/// [a, b, c, d] for a·x³ + b·x²y + c·xy² + d·y³ (x = x₁, y = x₂).
fn cubic_coeffs(g: &Series) -> [Elem; 4] {
    let m = |i, j| g.coeff(&Monomial::new(&[i, j]));
    [m(3, 0), m(2, 1), m(1, 2), m(0, 3)]
}

/// b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd.
pub fn binary_cubic_discriminant(g: &Series) -> Elem {
    let [a, b, c, d] = cubic_coeffs(g);
    let f = a.field();
    let k = |v: i64| f.from_i64(v);
    let prod = |xs: &[&Elem]| xs.iter().fold(f.one(), |acc, x| &acc * *x);
    let t1 = prod(&[&b, &b, &c, &c]);
    let t2 = &k(4) * &prod(&[&a, &c, &c, &c]);
    let t3 = &k(4) * &prod(&[&b, &b, &b, &d]);
    let t4 = &k(27) * &prod(&[&a, &a, &d, &d]);
    let t5 = &k(18) * &prod(&[&a, &b, &c, &d]);
    &(&(&(&t1 - &t2) - &t3) - &t4) + &t5
}

/// Rational linear factors p·x + q·y of the cubic part, with multiplicity.
fn linear_factors(g: &Series) -> Vec<((Elem, Elem), usize)> {
    let [a, b, c, d] = cubic_coeffs(g);
    let f = a.field();
    // C(x, t·x) = x³·(a + bt + ct² + dt³): root t₀ ↔ factor y − t₀x
    let poly = vec![a, b, c, d];
    let deg = poly.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    let mut out: Vec<((Elem, Elem), usize)> = poly_roots(&poly).into_iter().map(|(t, m)| ((-t, f.one()), m)).collect();
    if deg < 3 {
        out.push(((f.one(), f.zero()), 3 - deg));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetType {
    /// Three distinct lines: xy(x + y) over a closed field.
    ThreeLines,
    /// x²y.
    DoubleLine,
    /// x³.
    TripleLine,
}

#[derive(Debug, Clone)]
pub struct Jet3 {
    pub kind: JetType,
    /// Linear change taking the cubic jet to c·xy(x+y), c·x²y or c·x³.
    pub change: CoordinateChange,
    pub constant: Elem,
}

/// Linear substitution whose new coordinates are (l₁, l₂) = rows of `m`.
fn change_from_rows(field: FieldSpec, m: [(Elem, Elem); 2], prec: u32) -> Result<CoordinateChange, Fail> {
    let mat = vec![vec![m[0].0.clone(), m[0].1.clone()], vec![m[1].0.clone(), m[1].1.clone()]];
    let inv = linalg::inverse(&mat).ok_or_else(|| Fail::internal("dependent linear forms"))?;
    Ok(CoordinateChange::linear(field, &inv, prec)?)
}

fn complement(l: &(Elem, Elem)) -> (Elem, Elem) {
    let f = l.0.field();
    if l.0.is_zero() {
        (f.one(), f.zero())
    } else {
        (f.zero(), f.one())
    }
}

fn check_order_three(g: &Series) -> Result<(), ClassifyError> {
    if g.nvars() != 2 {
        return Err(ClassifyError::VariableCount { expected: 2, found: g.nvars() });
    }
    if g.order() != Order::Finite(3) {
        return Err(ClassifyError::WrongOrder { expected: 3, found: g.order() });
    }
    Ok(())
}

/// Type of the cubic jet of a two-variable series of order 3, with a
/// linear change reaching the named cubic up to a constant. Three distinct
/// lines need all three to be rational.
pub fn jet3_normal_form(g: &Series) -> Result<Jet3, ClassifyError> {
    check_order_three(g)?;
    let (field, prec) = (g.field(), g.precision());
    let factors = linear_factors(g);
    let disc = binary_cubic_discriminant(g);
    let fail = |_| ClassifyError::CubicRootsNotInField;
    let (kind, change) = if !disc.is_zero() {
        if factors.len() < 3 {
            return Err(ClassifyError::CubicRootsNotInField);
        }
        // l₃ = αl₁ + βl₂ → X = αl₁, Y = βl₂ gives XY(X+Y) = αβ·l₁l₂l₃
        let (l1, l2, l3) = (&factors[0].0, &factors[1].0, &factors[2].0);
        let m = vec![vec![l1.0.clone(), l2.0.clone()], vec![l1.1.clone(), l2.1.clone()]];
        let ab = linalg::solve(&m, &[l3.0.clone(), l3.1.clone()], &field.zero()).ok_or(ClassifyError::CubicRootsNotInField)?;
        let rows = [(&ab[0] * &l1.0, &ab[0] * &l1.1), (&ab[1] * &l2.0, &ab[1] * &l2.1)];
        (JetType::ThreeLines, change_from_rows(field, rows, prec).map_err(fail)?)
    } else if let Some(triple) = factors.iter().find(|f| f.1 == 3) {
        let l = triple.0.clone();
        let rows = [l.clone(), complement(&l)];
        (JetType::TripleLine, change_from_rows(field, rows, prec).map_err(fail)?)
    } else {
        let double = factors.iter().find(|f| f.1 == 2).ok_or(ClassifyError::CubicRootsNotInField)?;
        let single = factors.iter().find(|f| f.1 == 1).ok_or(ClassifyError::CubicRootsNotInField)?;
        let rows = [double.0.clone(), single.0.clone()];
        (JetType::DoubleLine, change_from_rows(field, rows, prec).map_err(fail)?)
    };
    let cubic = change.apply(g).map_err(|_| ClassifyError::CubicRootsNotInField)?.homogeneous(3);
    let named = match kind {
        JetType::ThreeLines => &[(2, 1), (1, 2)][..],
        JetType::DoubleLine => &[(2, 1)][..],
        JetType::TripleLine => &[(3, 0)][..],
    };
    let constant = cubic.coeff(&Monomial::new(&[named[0].0, named[0].1]));
    debug_assert_eq!(
        cubic,
        Series::from_terms(field, 2, prec, named.iter().map(|&(i, j)| (Monomial::new(&[i, j]), constant.clone())))
    );
    Ok(Jet3 { kind, change, constant })
}

/// Corank-2 residual of order ≥ 3.
pub(crate) fn corank_two(g: &Series) -> Result<ResidualForm, Fail> {
    match g.order() {
        Order::Finite(3) => {}
        Order::AbovePrecision if g.precision() < 3 => {
            return Err(Fail::Verdict(Verdict::Undetermined(super::UndeterminedReason::PrecisionTooLow)))
        }
        _ => return Err(Fail::not_simple(NotSimpleReason::ResidualOrderAtLeastFour)),
    }
    if !binary_cubic_discriminant(g).is_zero() {
        return d4(g);
    }
    let factors = linear_factors(g);
    if let Some(t) = factors.iter().find(|f| f.1 == 3) {
        return e_family(g, &t.0);
    }
    let double = factors.iter().find(|f| f.1 == 2);
    let single = factors.iter().find(|f| f.1 == 1);
    match (double, single) {
        (Some(d), Some(s)) => d_family(g, &s.0, &d.0),
        _ => Err(Fail::internal("repeated root of a cubic not found")),
    }
}

// ---------------------------------------------------------------------
// D
// ---------------------------------------------------------------------

/// Three distinct lines. D₄ = x₁(x₂² + x₁²) needs a rational line l with
/// cubic l·(αv² + βlv + γl²) and (γ − β²/4α)/α a square.
fn d4(g: &Series) -> Result<ResidualForm, Fail> {
    let (field, prec) = (g.field(), g.precision());
    let base = Normalizer::new(g);
    let two = field.from_i64(2);
    let four = field.from_i64(4);
    for (l, _) in linear_factors(g) {
        let mut st = base.clone();
        st.substitute(&change_from_rows(field, [l.clone(), complement(&l)], prec)?)?;
        let c = |i, j| st.cur.coeff(&Monomial::new(&[i, j]));
        let (alpha, beta, gamma) = (c(1, 2), c(2, 1), c(3, 0));
        let gp = &gamma - &(&(&beta * &beta) / &(&four * &alpha));
        let Some(b) = (&gp / &alpha).sqrt() else { continue };
        // v ↦ b·v − β/(2α)·u turns the cubic into γ'(uv² + u³)
        let shift = -(&beta / &(&two * &alpha));
        st.substitute(&CoordinateChange::linear(field, &vec![vec![field.one(), field.zero()], vec![shift, b]], prec)?)?;
        st.divide_const(&gp)?;
        let h = poly(field, prec, &[(1, 2), (3, 0)]);
        let (h, _) = finish(&mut st, h, &[1, 1], 3, vec![])?;
        return Ok(ResidualForm::from_state(&st, Verdict::D(4), h, vec![1, 1], 3));
    }
    Err(Fail::root("D4: no rational line with square quadratic cofactor"))
}

fn poly(field: FieldSpec, prec: u32, exps: &[(u32, u32)]) -> Series {
    Series::from_terms(field, 2, prec, exps.iter().map(|&(i, j)| (Monomial::new(&[i, j]), field.one())))
}

/// Double line: u = simple line, v = double line, cubic → uv². Then for
/// k = 4, 5, …: degree-k part αu^k + βu^{k−1}v + v²·h is reduced to αu^k
/// by u ↦ u − h, v ↦ v − (β/2)u^{k−2}; the first α ≠ 0 gives D_{k+1}.
fn d_family(g: &Series, single: &(Elem, Elem), double: &(Elem, Elem)) -> Result<ResidualForm, Fail> {
    let (field, prec) = (g.field(), g.precision());
    let mut st = Normalizer::new(g);
    st.substitute(&change_from_rows(field, [single.clone(), double.clone()], prec)?)?;
    let kappa = st.cur.coeff(&Monomial::new(&[1, 2]));
    st.divide_const(&kappa)?;
    let half = field.from_i64(2).inv().expect("odd characteristic");
    for k in 4..=prec {
        let part = st.cur.homogeneous(k);
        let alpha = part.coeff(&Monomial::new(&[k, 0]));
        let beta = part.coeff(&Monomial::new(&[k - 1, 1]));
        let hterms: Vec<_> = part
            .terms()
            .iter()
            .filter(|(m, _)| m.exp(1) >= 2)
            .map(|(m, c)| (Monomial::new(&[m.exp(0), m.exp(1) - 2]), c.clone()))
            .collect();
        if !beta.is_zero() || !hterms.is_empty() {
            let u = Series::var(field, 2, prec, 0).sub(&Series::from_terms(field, 2, prec, hterms))?;
            let v = Series::var(field, 2, prec, 1)
                .sub(&Series::monomial(field, 2, prec, Monomial::new(&[k - 2, 0]), &beta * &half))?;
            st.substitute_components(vec![u, v])?;
        }
        if alpha.is_zero() {
            continue;
        }
        // uv² + αu^k: scale to c·(uv² + u^k)
        if k % 2 == 0 {
            let mu = alpha.pow((k / 2) as u64);
            st.scale_vars(&[alpha.clone(), mu])?;
            st.divide_const(&alpha.pow(k as u64 + 1))?;
        } else {
            let mu = alpha.sqrt().ok_or_else(|| Fail::root(format!("square root of {alpha} for D{}", k + 1)))?;
            st.scale_vars(&[field.one(), mu])?;
            st.divide_const(&alpha)?;
        }
        let h = poly(field, prec, &[(1, 2), (k, 0)]);
        let (h, _) = finish(&mut st, h, &[2, k - 1], 2 * k, vec![])?;
        let gcd = if (k - 1) % 2 == 0 { 2 } else { 1 };
        return Ok(ResidualForm::from_state(&st, Verdict::D(k + 1), h, vec![2 / gcd, (k - 1) / gcd], 2 * k / gcd));
    }
    let h = poly(field, prec, &[(1, 2)]);
    if st.cur != h {
        return Err(Fail::stalled("D loop did not reach uv²"));
    }
    Ok(ResidualForm::from_state(&st, Verdict::DAtLeast(prec), h, vec![1, 0], 1))
}

/// Dₖ decision for a two-variable series whose cubic jet has a double or
/// three distinct lines, with a certificate in those two variables.
pub fn d_reduce(g: &Series) -> Result<Classification, ClassifyError> {
    let jet = jet_kind(g)?;
    if jet == JetType::TripleLine {
        return Err(ClassifyError::Unsupported("cubic jet is a triple line (E family)".into()));
    }
    Ok(run(g, corank_two))
}

fn jet_kind(g: &Series) -> Result<JetType, ClassifyError> {
    check_order_three(g)?;
    if !binary_cubic_discriminant(g).is_zero() {
        return Ok(JetType::ThreeLines);
    }
    Ok(if linear_factors(g).iter().any(|f| f.1 == 3) { JetType::TripleLine } else { JetType::DoubleLine })
}

// ---------------------------------------------------------------------
// E
// ---------------------------------------------------------------------

/// f = θ·x₁³ + a·x₁²x₂² + b·x₁x₂³ + c·x₂⁴ with θ a unit and a, b, c series
/// in x₂ alone (here the cubed variable is x₁).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ECoefficients {
    pub theta: Series,
    pub a: Series,
    pub b: Series,
    pub c: Series,
}

impl ECoefficients {
    /// Rebuild θx₁³ + ax₁²x₂² + bx₁x₂³ + cx₂⁴ at precision N.
    pub fn series(&self, prec: u32) -> Series {
        let field = self.theta.field();
        let lift = |s: &Series, m: [u32; 2]| s.with_precision(prec).shift(&Monomial::new(&m));
        [lift(&self.theta, [3, 0]), lift(&self.a, [2, 2]), lift(&self.b, [1, 3]), lift(&self.c, [0, 4])]
            .iter()
            .fold(Series::zero(field, 2, prec), |acc, s| acc.add(s).expect("same ring"))
    }
}

/// Read off the E coefficients of a two-variable series whose cubic part is
/// exactly x₁³.
pub fn e_normalize(g: &Series) -> Result<ECoefficients, ClassifyError> {
    check_order_three(g)?;
    let (field, prec) = (g.field(), g.precision());
    let cubic = g.homogeneous(3);
    if cubic.num_terms() != 1 || cubic.terms()[0].0 != Monomial::new(&[3, 0]) {
        return Err(ClassifyError::Unsupported("cubic part is not a multiple of x1^3".into()));
    }
    let (mut th, mut a, mut b, mut c) = (vec![], vec![], vec![], vec![]);
    for (m, k) in g.terms() {
        let (i, j) = (m.exp(0), m.exp(1));
        match i {
            3.. => th.push((Monomial::new(&[i - 3, j]), k.clone())),
            2 => a.push((Monomial::new(&[0, j - 2]), k.clone())),
            1 => b.push((Monomial::new(&[0, j - 3]), k.clone())),
            _ => c.push((Monomial::new(&[0, j - 4]), k.clone())),
        }
    }
    let p = |d: u32| prec.saturating_sub(d);
    Ok(ECoefficients {
        theta: Series::from_terms(field, 2, p(3), th),
        a: Series::from_terms(field, 2, p(4), a),
        b: Series::from_terms(field, 2, p(4), b),
        c: Series::from_terms(field, 2, p(4), c),
    })
}

/// Membership of f in ⟨xᵢ, xⱼ²⟩³ = ⟨xᵢ³, xᵢ²xⱼ², xᵢxⱼ⁴, xⱼ⁶⟩ (modulo the
/// precision), for f in the variables xᵢ, xⱼ.
pub fn ideal_cube_membership(f: &Series, x_index: usize, y_index: usize) -> bool {
    f.terms().iter().all(|(m, _)| {
        let (a, b) = (m.exp(x_index), m.exp(y_index));
        a >= 3 || (a >= 2 && b >= 2) || (a >= 1 && b >= 4) || b >= 6
    })
}

fn mono(i: u32, j: u32) -> Monomial {
    Monomial::new(&[i, j])
}

fn e_family(g: &Series, l: &(Elem, Elem)) -> Result<ResidualForm, Fail> {
    let (field, prec) = (g.field(), g.precision());
    let p = field.characteristic();
    let mut st = Normalizer::new(g);
    st.substitute(&change_from_rows(field, [l.clone(), complement(l)], prec)?)?;
    let kappa = st.cur.coeff(&mono(3, 0));
    st.divide_const(&kappa)?;
    e_from_normalized(st, p)
}

/// Continue from a state whose cubic part is x₁³.
fn e_from_normalized(mut st: Normalizer, p: u64) -> Result<ResidualForm, Fail> {
    let (field, prec) = (st.field(), st.prec());
    let c = |i, j| st.cur.coeff(&mono(i, j));
    let (c0, b0, c1) = (c(0, 4), c(1, 3), c(0, 5));
    let m = |i, j, v| Modulus { monomial: mono(i, j), verdict: v };
    // leading scaling x₁ ↦ αx₁, x₂ ↦ βx₂ with r the relevant coefficient
    let (r, exps, weights, d, base, moduli) = if !c0.is_zero() {
        let md = if p == 3 { vec![m(2, 2, Verdict::E6_1)] } else { vec![] };
        (c0, (3, 2, 9), [4, 3], 12, Verdict::E6, md)
    } else if !b0.is_zero() {
        let md = if p == 3 { vec![m(2, 2, Verdict::E7_1)] } else { vec![] };
        (b0, (2, 1, 6), [3, 2], 9, Verdict::E7, md)
    } else if !c1.is_zero() {
        let md = match p {
            3 => vec![m(2, 2, Verdict::E8_2Char3), m(2, 3, Verdict::E8_1Char3)],
            5 => vec![m(1, 4, Verdict::E8_1Char5)],
            _ => vec![],
        };
        (c1, (2, 1, 6), [5, 3], 15, Verdict::E8, md)
    } else {
        debug_assert!(ideal_cube_membership(&st.cur, 0, 1));
        return Err(Fail::not_simple(NotSimpleReason::InIdealCube));
    };
    let (ea, eb, ediv) = exps;
    st.scale_vars(&[r.pow(ea), r.pow(eb)])?;
    st.divide_const(&r.pow(ediv))?;
    let h = match base {
        Verdict::E6 => poly(field, prec, &[(3, 0), (0, 4)]),
        Verdict::E7 => poly(field, prec, &[(3, 0), (1, 3)]),
        _ => poly(field, prec, &[(3, 0), (0, 5)]),
    };
    let (h, extra) = finish(&mut st, h, &weights, d, moduli)?;
    let verdict = extra.unwrap_or(base);
    Ok(ResidualForm::from_state(&st, verdict, h, weights.to_vec(), d))
}

/// E decision from the coefficients θ, a, b, c (cubed variable x₁), with a
/// certificate for θx₁³ + ax₁²x₂² + bx₁x₂³ + cx₂⁴ in two variables.
pub fn e_classify(coeffs: &ECoefficients, prec: u32) -> Result<Classification, ClassifyError> {
    if !coeffs.theta.is_unit() {
        return Err(ClassifyError::Unsupported("theta is not a unit".into()));
    }
    let g = coeffs.series(prec);
    let p = g.field().characteristic();
    let theta0 = coeffs.theta.constant_term();
    Ok(run(&g, |g| {
        let mut st = Normalizer::new(g);
        st.divide_const(&theta0)?;
        e_from_normalized(st, p)
    }))
}
