//! Weighted Newton finisher.
//!
//! Given a state whose lowest weighted part equals the quasi-homogeneous
//! target H (weights w, degree d), remove G − H weight by weight. At weight
//! s the weight-s part E_s must be written as
//!
//!   Σᵢ (hᵢ·∂ᵢG)_s + (c·G)_s,
//!
//! after which xᵢ ↦ xᵢ − hᵢ and G ↦ G/(1 + c) cancel it. When E_s is not in
//! that span, a characteristic-specific modulus monomial M may absorb the
//! rest: E_s ≡ κ·M; κ is then scaled to 1 and M joins the target.

use super::normalizer::Normalizer;
use super::{Fail, Verdict};
use crate::linalg;
use crate::series::{Monomial, Series};

pub(crate) struct Modulus {
    pub monomial: Monomial,
    pub verdict: Verdict,
}

#[derive(Clone, Copy)]
enum Col {
    Var(usize, Monomial),
    Unit(Monomial),
    Modulus(usize),
}

/// Run to completion. Returns the final target (H plus any modulus term)
/// and the modulus verdict if one was used.
pub(crate) fn finish(
    st: &mut Normalizer,
    mut h: Series,
    w: &[u32],
    d: u32,
    moduli: Vec<Modulus>,
) -> Result<(Series, Option<Verdict>), Fail> {
    let n = st.nvars();
    let field = st.field();
    let prec = st.prec();
    let p = field.characteristic();
    let mut moduli = moduli;
    let mut found = None;
    let mut last = d;
    let max_weight = prec * w.iter().copied().max().unwrap_or(1) + 1;
    loop {
        let e = st.cur.sub(&h)?;
        let Some(s) = e.weighted_order(w) else {
            return Ok((h, found));
        };
        if s <= last {
            return Err(Fail::stalled(format!("weight {s} reappeared after weight {last}")));
        }
        if s > max_weight {
            return Err(Fail::internal("weight bound exceeded"));
        }
        let es = e.weighted_part(w, s);

        let mut cols: Vec<(Col, Series)> = Vec::new();
        let derivs: Vec<Series> = (0..n).map(|i| st.cur.derivative(i)).collect();
        let mut deltas: Vec<Option<i64>> = vec![None; n];
        for i in 0..n {
            let Some(ei) = derivs[i].weighted_order(w) else { continue };
            if ei >= s {
                continue;
            }
            let delta = (s - ei) as i64 - w[i] as i64;
            if nonlinear_ok(&st.cur, w, i, delta, s, p) {
                deltas[i] = Some(delta);
            }
        }
        // mixed second-order terms hᵢhⱼ∂ᵢ∂ⱼG must also stay above weight s
        for i in 0..n {
            for j in i + 1..n {
                if let (Some(di), Some(dj)) = (deltas[i], deltas[j]) {
                    let clash = st.cur.terms().iter().any(|(m, _)| {
                        m.exp(i) > 0 && m.exp(j) > 0 && m.weighted_degree(w) as i64 + di + dj <= s as i64
                    });
                    if clash {
                        if di < dj {
                            deltas[i] = None;
                        } else {
                            deltas[j] = None;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let Some(delta) = deltas[i] else { continue };
            let target = (delta + w[i] as i64) as u32;
            for m in monomials_of_weight(n, w, target, prec) {
                if m == Monomial::var(i) {
                    continue;
                }
                let ms = Series::monomial(field, n, prec, m, field.one());
                let col = ms.mul_to(&derivs[i], prec).weighted_part(w, s);
                if !col.is_zero() {
                    cols.push((Col::Var(i, m), col));
                }
            }
        }
        for m in monomials_of_weight(n, w, s - d, prec) {
            let ms = Series::monomial(field, n, prec, m, field.one());
            let col = ms.mul_to(&st.cur, prec).weighted_part(w, s);
            if !col.is_zero() {
                cols.push((Col::Unit(m), col));
            }
        }

        let mut sol = solve(&cols, &es);
        if sol.is_none() {
            let mut with_mod = cols.clone();
            for (k, md) in moduli.iter().enumerate() {
                if md.monomial.weighted_degree(w) == s {
                    let col = Series::monomial(field, n, prec, md.monomial, field.one());
                    with_mod.push((Col::Modulus(k), col));
                }
            }
            if with_mod.len() > cols.len() {
                sol = solve(&with_mod, &es);
                cols = with_mod;
            }
        }
        let Some(x) = sol else {
            return Err(Fail::stalled(format!("weight {s} part not removable")));
        };

        let mut shifts: Vec<Series> = (0..n).map(|i| Series::var(field, n, prec, i)).collect();
        let mut unit = Series::one(field, n, prec);
        let mut moved = false;
        let mut obstruction: Option<(usize, crate::field::Elem)> = None;
        for ((col, _), a) in cols.iter().zip(&x) {
            if a.is_zero() {
                continue;
            }
            match col {
                Col::Var(i, m) => {
                    let t = Series::monomial(field, n, prec, *m, a.clone());
                    shifts[*i] = shifts[*i].sub(&t)?;
                    moved = true;
                }
                Col::Unit(m) => {
                    let t = Series::monomial(field, n, prec, *m, a.clone());
                    unit = unit.add(&t)?;
                }
                Col::Modulus(k) => obstruction = Some((*k, a.clone())),
            }
        }
        if moved {
            st.substitute_components(shifts)?;
        }
        if unit.num_terms() > 1 {
            st.divide(&unit)?;
        }
        if let Some((k, kappa)) = obstruction {
            let md = moduli.swap_remove(k);
            let wm = md.monomial.weighted_degree(w);
            let target = kappa.inv().expect("nonzero");
            let t = target
                .nth_root((wm - d) as u64)
                .ok_or_else(|| Fail::root(format!("{}-th root of {} for the {} term", wm - d, target, md.verdict.label())))?;
            let scales: Vec<_> = w.iter().map(|&wi| t.pow(wi as u64)).collect();
            st.scale_vars(&scales)?;
            st.divide_const(&t.pow(d as u64))?;
            h = h.add(&Series::monomial(field, n, prec, md.monomial, field.one()))?;
            found = Some(md.verdict);
            moduli.clear();
        }
        last = s;
    }
}

fn solve(cols: &[(Col, Series)], rhs: &Series) -> Option<Vec<crate::field::Elem>> {
    let field = rhs.field();
    let mut rows: Vec<Monomial> = rhs.terms().iter().map(|(m, _)| *m).collect();
    for (_, c) in cols {
        rows.extend(c.terms().iter().map(|(m, _)| *m));
    }
    rows.sort();
    rows.dedup();
    let a: linalg::Matrix = rows.iter().map(|m| cols.iter().map(|(_, c)| c.coeff(m)).collect()).collect();
    let b: Vec<_> = rows.iter().map(|m| rhs.coeff(m)).collect();
    if cols.is_empty() {
        return b.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    linalg::solve(&a, &b, &field.zero())
}

/// Every k ≥ 2 Taylor term of xᵢ ↦ xᵢ − h (h of weight wᵢ + δ) must land
/// above weight s; binomials that vanish mod p do not count.
fn nonlinear_ok(g: &Series, w: &[u32], i: usize, delta: i64, s: u32, p: u64) -> bool {
    g.terms().iter().all(|(m, _)| {
        let a = m.exp(i);
        let wt = m.weighted_degree(w) as i64;
        (2..=a).all(|k| !binomial_nonzero_mod(a, k, p) || wt + k as i64 * delta > s as i64)
    })
}

/// C(a, k) ≢ 0 mod p (Lucas); always true in characteristic 0.
fn binomial_nonzero_mod(mut a: u32, mut k: u32, p: u64) -> bool {
    if p == 0 {
        return k <= a;
    }
    let p = p as u32;
    while k > 0 || a > 0 {
        if k % p > a % p {
            return false;
        }
        k /= p;
        a /= p;
    }
    true
}

/// Monomials of weighted degree exactly `target` and total degree ≤ maxdeg.
pub(crate) fn monomials_of_weight(n: usize, w: &[u32], target: u32, maxdeg: u32) -> Vec<Monomial> {
    fn rec(i: usize, n: usize, w: &[u32], left: u32, deg: u32, maxdeg: u32, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == n {
            if left == 0 {
                out.push(Monomial::new(e));
            }
            return;
        }
        let mut k = 0;
        while k * w[i] <= left && deg + k <= maxdeg {
            e[i] = k;
            rec(i + 1, n, w, left - k * w[i], deg + k, maxdeg, e, out);
            k += 1;
        }
        e[i] = 0;
    }
    let mut out = Vec::new();
    if target == 0 {
        return out;
    }
    rec(0, n, w, target, 0, maxdeg, &mut vec![0; n], &mut out);
    out
}
