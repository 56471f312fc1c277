//! Diagonal quadratic forms: find T with Σ uᵢ(Tx)ᵢ² = λ·Σ xᵢ².

use crate::field::Elem;

/// Linear substitution matrix T (xᵢ ↦ Σⱼ T[i][j]·xⱼ) taking Σ uᵢxᵢ² to
/// λ·Σ xᵢ², or `None` if none is found.
///
/// Over 𝔽ₚ each ratio aᵢ = uᵢ/λ that is a square is rescaled; nonsquare
/// ratios are paired: with a·s² + b·t² = 1, the vectors (s, t) and
/// (−bt, as) turn a·x² + b·y² into X² + ab·Y², and ab is a square. An odd
/// number of nonsquare ratios means the discriminants differ: `None`.
/// Over ℚ only the all-squares case is handled.
pub fn isometry_to_scalar(units: &[Elem], lambda: &Elem) -> Option<Vec<Vec<Elem>>> {
    let r = units.len();
    let field = lambda.field();
    let mut t = vec![vec![field.zero(); r]; r];
    let mut pending: Option<(usize, Elem)> = None;
    for (i, u) in units.iter().enumerate() {
        let a = u.div(lambda)?;
        if let Some(s) = a.sqrt() {
            t[i][i] = s.inv()?;
            continue;
        }
        if field.is_rational() {
            return None;
        }
        match pending.take() {
            None => pending = Some((i, a)),
            Some((j, b)) => {
                // b·x_j² + a·x_i²
                let (s, tt) = sum_of_two_squares_rep(&b, &a)?;
                let root = (&b * &a).sqrt()?.inv()?;
                t[j][j] = s.clone();
                t[j][i] = -(&(&a * &tt) * &root);
                t[i][j] = tt.clone();
                t[i][i] = &(&b * &s) * &root;
            }
        }
    }
    pending.is_none().then_some(t)
}

/// s, t with a·s² + b·t² = 1 over 𝔽ₚ (always solvable for a, b ≠ 0).
fn sum_of_two_squares_rep(a: &Elem, b: &Elem) -> Option<(Elem, Elem)> {
    let field = a.field();
    let p = field.characteristic();
    for v in 0..p.min(1 << 20) {
        let t = field.from_i64(v as i64);
        let rest = &field.one() - &(&(b * &t) * &t);
        if let Some(s) = rest.div(a).and_then(|x| x.sqrt()) {
            return Some((s, t));
        }
    }
    None
}
