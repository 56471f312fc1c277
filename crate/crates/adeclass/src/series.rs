//! Truncated multivariate power series with exact coefficients.
//!
//! A `Series` with precision N stands for an element of κ[[x₁..xₙ]] known
//! modulo m^{N+1}. Terms are kept sorted in graded order (degree first, then
//! lexicographic with x₁ largest), zeros are never stored, so structural
//! equality is mathematical equality at that precision.

use crate::field::{Elem, FieldSpec};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

pub const MAX_VARS: usize = 8;
pub const MAX_PRECISION: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("the coefficient field has no root of {0}")]
    RootNotInField(String),
    #[error("jet degree {k} is outside 0..={precision}")]
    JetOutOfRange { k: u32, precision: u32 },
    #[error("substitution argument {0} is not in the maximal ideal")]
    ArgumentNotInMaximalIdeal(usize),
    #[error("expected {expected} substitution arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("precision {0} outside 1..={MAX_PRECISION}")]
    BadPrecision(u32),
}

// ===================================================================
// Monomials
// ===================================================================

/// Exponent vector packed one byte per variable, x₁ in the top byte.
/// Degrees never exceed `MAX_PRECISION`, so adding packed values never
/// carries between bytes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS);
        let mut v = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= 255, "exponent too large");
            v |= (e as u64) << (8 * (7 - i));
        }
        Monomial(v)
    }

    pub fn var(i: usize) -> Monomial {
        Monomial(1u64 << (8 * (7 - i)))
    }

    pub fn var_pow(i: usize, e: u32) -> Monomial {
        Monomial((e as u64) << (8 * (7 - i)))
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.0 >> (8 * (7 - i))) & 0xff) as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        (self.0.wrapping_mul(0x0101_0101_0101_0101) >> 56) as u32
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0 + o.0)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(o.0 - self.0)
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        weights.iter().enumerate().map(|(i, w)| w * self.exp(i)).sum()
    }

    /// Does the monomial only involve variables listed in `vars`?
    pub fn supported_on(&self, vars: &[usize]) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) == 0 || vars.contains(&i))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then(o.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn binom_table() -> &'static Vec<[u64; MAX_VARS + 1]> {
    static T: OnceLock<Vec<[u64; MAX_VARS + 1]>> = OnceLock::new();
    T.get_or_init(|| {
        let rows = MAX_PRECISION as usize + MAX_VARS + 2;
        let mut t = vec![[0u64; MAX_VARS + 1]; rows];
        for a in 0..rows {
            t[a][0] = 1;
            for b in 1..=MAX_VARS {
                if a > 0 {
                    t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
                }
            }
        }
        t
    })
}

#[inline]
fn binom(a: u32, b: usize) -> u64 {
    binom_table()[a as usize][b]
}

/// Number of monomials of degree ≤ d in n variables.
pub fn monomial_count(n: usize, d: u32) -> u64 {
    binom(d + n as u32, n)
}

/// Position of `m` in the graded order on n variables (matches `Ord`).
#[inline]
fn rank(m: &Monomial, n: usize) -> usize {
    let d = m.degree();
    let mut r = if d == 0 { 0 } else { monomial_count(n, d - 1) };
    let mut rem = d;
    for i in 0..n.saturating_sub(1) {
        let e = m.exp(i);
        let k = (n - i) as u32;
        // monomials of degree `rem` in k vars whose first exponent exceeds e
        if rem > e {
            r += binom(rem - e - 1 + k - 1, (k - 1) as usize);
        }
        rem -= e;
    }
    r as usize
}

fn unrank_all(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    for deg in 0..=d {
        fill(&mut out, &mut cur, 0, deg, n);
    }
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, i: usize, rem: u32, n: usize) {
    if i + 1 == n {
        cur[i] = rem;
        out.push(Monomial::new(cur));
        return;
    }
    for e in (0..=rem).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, rem - e, n);
    }
    cur[i] = 0;
}

/// All monomials in n variables of degree ≤ d, in graded order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    if n == 0 {
        return vec![Monomial::ONE];
    }
    unrank_all(n, d)
}

// ===================================================================
// Series
// ===================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    /// Zero modulo m^{N+1}: the order is only known to exceed N.
    AbovePrecision,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::AbovePrecision => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    field: FieldSpec,
    nvars: usize,
    prec: u32,
    terms: Vec<(Monomial, Elem)>,
}

const DENSE_LIMIT: u64 = 60_000;

impl Series {
    pub fn zero(field: FieldSpec, nvars: usize, prec: u32) -> Series {
        assert!(nvars <= MAX_VARS, "too many variables");
        assert!(prec <= MAX_PRECISION, "precision too large");
        Series { field: field.with_closure_flag(false), nvars, prec, terms: Vec::new() }
    }

    pub fn constant(field: FieldSpec, nvars: usize, prec: u32, c: Elem) -> Series {
        Series::monomial(field, nvars, prec, Monomial::ONE, c)
    }

    pub fn one(field: FieldSpec, nvars: usize, prec: u32) -> Series {
        Series::constant(field, nvars, prec, field.one())
    }

    pub fn var(field: FieldSpec, nvars: usize, prec: u32, i: usize) -> Series {
        assert!(i < nvars);
        Series::monomial(field, nvars, prec, Monomial::var(i), field.one())
    }

    pub fn monomial(field: FieldSpec, nvars: usize, prec: u32, m: Monomial, c: Elem) -> Series {
        Series::from_terms(field, nvars, prec, [(m, c)])
    }

    /// Build from arbitrary (monomial, coefficient) pairs; like terms are
    /// collected, zeros and terms above the precision are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Elem)>>(
        field: FieldSpec,
        nvars: usize,
        prec: u32,
        it: I,
    ) -> Series {
        let mut map: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (m, c) in it {
            if m.degree() > prec || c.is_zero() {
                continue;
            }
            debug_assert!(m.supported_on(&(0..nvars).collect::<Vec<_>>()));
            match map.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut s = Series::zero(field, nvars, prec);
        s.terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        s
    }

    // Terms already sorted, collected and nonzero.
    fn from_sorted(field: FieldSpec, nvars: usize, prec: u32, terms: Vec<(Monomial, Elem)>) -> Series {
        Series { field: field.with_closure_flag(false), nvars, prec, terms }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::ONE)
    }

    pub fn order(&self) -> Order {
        match self.terms.first() {
            Some((m, _)) => Order::Finite(m.degree()),
            None => Order::AbovePrecision,
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Same series viewed at a lower (or equal) precision.
    pub fn truncate(&self, prec: u32) -> Series {
        let prec = prec.min(self.prec);
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= prec).cloned().collect();
        Series::from_sorted(self.field, self.nvars, prec, terms)
    }

    /// Claim a higher precision: only valid when the caller knows the
    /// missing terms vanish (e.g. for exact polynomials).
    pub fn with_precision(&self, prec: u32) -> Series {
        let mut s = self.truncate(prec);
        s.prec = prec;
        s
    }

    pub fn jet(&self, k: u32) -> Result<Series, SeriesError> {
        if k > self.prec {
            return Err(SeriesError::JetOutOfRange { k, precision: self.prec });
        }
        Ok(self.truncate(k))
    }

    /// The degree-d homogeneous part (as a series at the same precision).
    pub fn homogeneous(&self, d: u32) -> Series {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Series::from_sorted(self.field, self.nvars, self.prec, terms)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Series {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect();
        Series::from_sorted(self.field, self.nvars, self.prec, terms)
    }

    pub fn restrict_support(&self, vars: &[usize]) -> bool {
        self.terms.iter().all(|(m, _)| m.supported_on(vars))
    }

    fn check_compat(&self, o: &Series) -> Result<(), SeriesError> {
        if self.nvars != o.nvars {
            return Err(SeriesError::VarCountMismatch(self.nvars, o.nvars));
        }
        assert_eq!(self.field, o.field, "mixed coefficient fields");
        Ok(())
    }

    pub fn add(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check_compat(o)?;
        Ok(self.combine(o, false))
    }

    pub fn sub(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check_compat(o)?;
        Ok(self.combine(o, true))
    }

    fn combine(&self, o: &Series, negate: bool) -> Series {
        let prec = self.prec.min(o.prec);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some((ma, _)), Some((mb, _))) => ma.cmp(mb),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (m, c) = match ord {
                Ordering::Less => {
                    i += 1;
                    (a[i - 1].0, a[i - 1].1.clone())
                }
                Ordering::Greater => {
                    j += 1;
                    let c = if negate { -&b[j - 1].1 } else { b[j - 1].1.clone() };
                    (b[j - 1].0, c)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    let c = if negate { &a[i - 1].1 - &b[j - 1].1 } else { &a[i - 1].1 + &b[j - 1].1 };
                    (a[i - 1].0, c)
                }
            };
            if m.degree() <= prec && !c.is_zero() {
                out.push((m, c));
            }
        }
        Series::from_sorted(self.field, self.nvars, prec, out)
    }

    /// Zero in the same ring and at the same precision.
    pub fn zero_like(&self) -> Series {
        Series::zero(self.field, self.nvars, self.prec)
    }

    pub fn neg(&self) -> Series {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        Series::from_sorted(self.field, self.nvars, self.prec, terms)
    }

    pub fn scale(&self, c: &Elem) -> Series {
        if c.is_zero() {
            return Series::zero(self.field, self.nvars, self.prec);
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, a * c)).collect();
        Series::from_sorted(self.field, self.nvars, self.prec, terms)
    }

    /// Multiply by a monomial (exponents beyond the precision drop out).
    pub fn shift(&self, m: &Monomial) -> Series {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.mul(m), c.clone()))
            .filter(|(k, _)| k.degree() <= self.prec)
            .collect();
        Series::from_sorted(self.field, self.nvars, self.prec, terms)
    }

    pub fn mul(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check_compat(o)?;
        let prec = self.prec.min(o.prec);
        Ok(self.mul_to(o, prec))
    }

    /// Product truncated at degree `prec`, ignoring the operands' own
    /// precision labels (callers use this when the operands' unknown tails
    /// are provably irrelevant, e.g. one factor lies in m^k).
    pub fn mul_to(&self, o: &Series, prec: u32) -> Series {
        let n = self.nvars;
        if self.terms.is_empty() || o.terms.is_empty() {
            return Series::zero(self.field, n, prec);
        }
        let count = monomial_count(n, prec);
        let terms = if count <= DENSE_LIMIT {
            match self.field.characteristic() {
                0 => mul_dense_generic(&self.terms, &o.terms, n, prec, count as usize, &self.field),
                p => mul_dense_fp(&self.terms, &o.terms, n, prec, count as usize, p),
            }
        } else {
            mul_sparse(&self.terms, &o.terms, prec)
        };
        Series::from_sorted(self.field, n, prec, terms)
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(self.field, self.nvars, self.prec);
        for _ in 0..k {
            acc = acc.mul_to(self, self.prec);
        }
        acc
    }

    pub fn invert_unit(&self) -> Result<Series, SeriesError> {
        let c = self.constant_term();
        let c_inv = c.inv().ok_or(SeriesError::NotAUnit)?;
        let two = Series::constant(self.field, self.nvars, self.prec, self.field.from_i64(2));
        let mut g = Series::constant(self.field, self.nvars, 0, c_inv);
        let mut p = 0;
        while p < self.prec {
            p = (2 * p + 1).min(self.prec);
            let g_p = g.with_precision(p);
            let fg = self.mul_to(&g_p, p);
            g = g_p.mul_to(&two.truncate(p).combine(&fg, true), p);
        }
        Ok(g.with_precision(self.prec))
    }

    /// Square root of a unit by Newton iteration on the inverse square root
    /// (valid because 2 is invertible). The constant term of the result is
    /// the field's canonical root of the input's constant term.
    pub fn sqrt_unit(&self) -> Result<Series, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let r = c.sqrt().ok_or_else(|| SeriesError::RootNotInField(c.to_string()))?;
        self.sqrt_with_root(&r)
    }

    /// As `sqrt_unit`, with the constant term's root supplied by the caller.
    pub fn sqrt_with_root(&self, r: &Elem) -> Result<Series, SeriesError> {
        let f = self.field;
        let half = f.from_i64(2).inv().expect("char != 2");
        let three = f.from_i64(3);
        let mut y = Series::constant(f, self.nvars, 0, r.inv().ok_or(SeriesError::NotAUnit)?);
        let mut p = 0;
        while p < self.prec {
            p = (2 * p + 1).min(self.prec);
            let y_p = y.with_precision(p);
            let fy2 = self.mul_to(&y_p.mul_to(&y_p, p), p);
            let corr = Series::constant(f, self.nvars, p, three.clone()).combine(&fy2, true);
            y = y_p.mul_to(&corr, p).scale(&half);
        }
        Ok(self.mul_to(&y.with_precision(self.prec), self.prec))
    }

    /// f(args₁, …, argsₙ). Every argument must lie in m; the result has
    /// the arguments' variable count and the minimum of all precisions.
    pub fn substitute(&self, args: &[Series]) -> Result<Series, SeriesError> {
        if args.len() != self.nvars {
            return Err(SeriesError::ArgumentCount { expected: self.nvars, got: args.len() });
        }
        let Some(first) = args.first() else {
            return Ok(self.clone());
        };
        let m = first.nvars;
        let mut prec = self.prec;
        for (i, a) in args.iter().enumerate() {
            if a.nvars != m {
                return Err(SeriesError::VarCountMismatch(m, a.nvars));
            }
            if !a.constant_term().is_zero() {
                return Err(SeriesError::ArgumentNotInMaximalIdeal(i));
            }
            prec = prec.min(a.prec);
        }
        let terms: Vec<(Monomial, Elem)> = self.terms.iter().filter(|(k, _)| k.degree() <= prec).cloned().collect();
        Ok(horner(&terms, 0, args, prec, self.field, m))
    }

    /// Formal partial derivative ∂/∂xᵢ; known to precision N−1.
    pub fn derivative(&self, i: usize) -> Series {
        let prec = self.prec.saturating_sub(1);
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(i);
            if e == 0 {
                return None;
            }
            let q = Monomial::var(i).quotient_of(m);
            Some((q, c * &self.field.from_i64(e as i64)))
        });
        Series::from_terms(self.field, self.nvars, prec, terms)
    }

    /// Re-embed in a ring with more (or permuted) variables: variable i of
    /// `self` becomes variable `map[i]` of the result.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Series {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; nvars];
            for (i, &j) in map.iter().enumerate() {
                e[j] += m.exp(i);
            }
            (Monomial::new(&e), c.clone())
        });
        Series::from_terms(self.field, nvars, self.prec, terms)
    }

    /// Weighted order: least Σ wᵢeᵢ among the terms.
    pub fn weighted_order(&self, weights: &[u32]) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.weighted_degree(weights)).min()
    }

    pub fn weighted_part(&self, weights: &[u32], s: u32) -> Series {
        self.filter(|m| m.weighted_degree(weights) == s)
    }
}

fn mul_dense_fp(a: &[(Monomial, Elem)], b: &[(Monomial, Elem)], n: usize, prec: u32, count: usize, p: u64) -> Vec<(Monomial, Elem)> {
    let mut acc = vec![0u64; count];
    let mut hit = vec![false; count];
    let val = |e: &Elem| match e {
        Elem::Fp(v, _) => *v,
        _ => unreachable!(),
    };
    for (ma, ca) in a {
        let da = ma.degree();
        if da > prec {
            break;
        }
        let va = val(ca);
        for (mb, cb) in b {
            if da + mb.degree() > prec {
                break;
            }
            let m = ma.mul(mb);
            let r = rank(&m, n);
            acc[r] = (acc[r] + va * val(cb)) % p;
            hit[r] = true;
        }
    }
    collect_dense(n, prec, &hit, |r| if acc[r] == 0 { None } else { Some(Elem::Fp(acc[r], p)) })
}

fn mul_dense_generic(
    a: &[(Monomial, Elem)],
    b: &[(Monomial, Elem)],
    n: usize,
    prec: u32,
    count: usize,
    field: &FieldSpec,
) -> Vec<(Monomial, Elem)> {
    let zero = field.zero();
    let mut acc = vec![zero; count];
    let mut hit = vec![false; count];
    for (ma, ca) in a {
        let da = ma.degree();
        if da > prec {
            break;
        }
        for (mb, cb) in b {
            if da + mb.degree() > prec {
                break;
            }
            let r = rank(&ma.mul(mb), n);
            acc[r] = &acc[r] + &(ca * cb);
            hit[r] = true;
        }
    }
    collect_dense(n, prec, &hit, |r| if acc[r].is_zero() { None } else { Some(acc[r].clone()) })
}

fn monomial_table(n: usize, prec: u32) -> Vec<Monomial> {
    // Cached per variable count; grown on demand.
    static CACHE: OnceLock<std::sync::Mutex<Vec<Vec<Monomial>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(vec![Vec::new(); MAX_VARS + 1]));
    let need = monomial_count(n, prec) as usize;
    let mut guard = cache.lock().expect("monomial cache");
    if guard[n].len() < need {
        guard[n] = monomials_up_to(n, prec);
    }
    guard[n][..need].to_vec()
}

fn collect_dense<F: Fn(usize) -> Option<Elem>>(n: usize, prec: u32, hit: &[bool], get: F) -> Vec<(Monomial, Elem)> {
    let table = monomial_table(n, prec);
    let mut out = Vec::new();
    for (r, h) in hit.iter().enumerate() {
        if *h {
            if let Some(c) = get(r) {
                out.push((table[r], c));
            }
        }
    }
    out
}

fn mul_sparse(a: &[(Monomial, Elem)], b: &[(Monomial, Elem)], prec: u32) -> Vec<(Monomial, Elem)> {
    let mut map: BTreeMap<Monomial, Elem> = BTreeMap::new();
    for (ma, ca) in a {
        let da = ma.degree();
        if da > prec {
            break;
        }
        for (mb, cb) in b {
            if da + mb.degree() > prec {
                break;
            }
            let m = ma.mul(mb);
            let prod = ca * cb;
            match map.get_mut(&m) {
                Some(v) => *v = &*v + &prod,
                None => {
                    map.insert(m, prod);
                }
            }
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

// Horner evaluation in variable k with precision-aware truncation: the
// coefficient of xₖ^e only matters modulo m^{prec−e+1}.
fn horner(terms: &[(Monomial, Elem)], k: usize, args: &[Series], prec: u32, field: FieldSpec, m: usize) -> Series {
    if terms.is_empty() {
        return Series::zero(field, m, prec);
    }
    if k == args.len() {
        let c: Elem = terms.iter().fold(field.zero(), |acc, (_, c)| &acc + c);
        return Series::constant(field, m, prec, c);
    }
    let mut groups: BTreeMap<u32, Vec<(Monomial, Elem)>> = BTreeMap::new();
    for (mono, c) in terms {
        let e = mono.exp(k);
        if e <= prec {
            let stripped = Monomial::var_pow(k, e).quotient_of(mono);
            groups.entry(e).or_default().push((stripped, c.clone()));
        }
    }
    let max_e = *groups.keys().next_back().expect("nonempty");
    let phi = &args[k];
    let mut acc: Option<Series> = None;
    for e in (0..=max_e).rev() {
        let p_e = prec - e;
        let g = groups.get(&e).map(|t| horner(t, k + 1, args, p_e, field, m));
        let next = match (acc.take(), g) {
            (None, g) => g,
            (Some(a), g) => {
                let prod = a.mul_to(&phi.truncate(p_e), p_e);
                Some(match g {
                    Some(g) => prod.combine(&g, false),
                    None => prod,
                })
            }
        };
        acc = next;
    }
    acc.unwrap_or_else(|| Series::zero(field, m, prec)).with_precision(prec)
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[n={}, N={}, {}]", self.nvars, self.prec, self)
    }
}

/// Renders with variables x1..xn; the cli module has a renderer with
/// user-chosen names.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", render_with(self, &names))
    }
}

/// Polynomial text in the cli grammar: `3*x^2*y - 1/2*z + 1`.
pub fn render_with(s: &Series, names: &[String]) -> String {
    if s.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in s.terms.iter().enumerate() {
        let r = c.to_rational_repr();
        let neg = r < num_rational::BigRational::from_integer(0.into());
        let abs = if neg { -r } else { r };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let is_one = abs == num_rational::BigRational::from_integer(1.into());
        if !is_one || m.degree() == 0 {
            if abs.is_integer() {
                factors.push(abs.numer().to_string());
            } else {
                factors.push(format!("{}/{}", abs.numer(), abs.denom()));
            }
        }
        for (i, name) in names.iter().enumerate().take(s.nvars) {
            match m.exp(i) {
                0 => {}
                1 => factors.push(name.clone()),
                e => factors.push(format!("{name}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Random series with terms of degree `min_degree..=max_degree` (each
/// monomial present with probability ½). With `min_degree = 0` and a
/// nonzero constant forced, this is a random unit.
pub fn random_series<R: rand::Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    n: usize,
    prec: u32,
    min_degree: u32,
    max_degree: u32,
) -> Series {
    let terms = monomials_up_to(n, max_degree.min(prec))
        .into_iter()
        .filter_map(|m| (m.degree() >= min_degree && rng.gen_bool(0.5)).then(|| (m, field.random(rng))))
        .collect::<Vec<_>>();
    Series::from_terms(field, n, prec, terms)
}

/// Random unit: nonzero constant plus a random tail up to `max_degree`.
pub fn random_unit<R: rand::Rng + ?Sized>(rng: &mut R, field: FieldSpec, n: usize, prec: u32, max_degree: u32) -> Series {
    let c = Series::constant(field, n, prec, field.random_nonzero(rng));
    c.add(&random_series(rng, field, n, prec, 1, max_degree)).expect("same ring")
}
