mod common;

use adeclass::chart::{random_change, ChartError};
use adeclass::linalg;
use adeclass::{CoordinateChange, Order, Series};
use common::{fp, q, s, show};
use proptest::prelude::*;

fn change(texts: &[&str], field: adeclass::FieldSpec, prec: u32) -> CoordinateChange {
    let n = texts.len();
    CoordinateChange::new(texts.iter().map(|t| s(t, n, field, prec)).collect()).unwrap()
}

#[test]
fn apply_identity_and_linear() {
    let f = s("x^3 + 2x*y + y^5", 2, q(), 8);
    let id = CoordinateChange::identity(q(), 2, 8);
    assert_eq!(id.apply(&f).unwrap(), f);
    let c = change(&["x + y", "y"], q(), 8);
    assert_eq!(show(&c.apply(&s("x^2", 2, q(), 8)).unwrap()), "x^2 + 2*x*y + y^2");
}

#[test]
fn apply_truncates() {
    let c = change(&["x", "y - x^2"], q(), 4);
    let g = c.apply(&s("y^2", 2, q(), 4)).unwrap();
    assert_eq!(g, s("y^2 - 2x^2 y + x^4", 2, q(), 4));
}

#[test]
fn compose_examples() {
    let c = change(&["x + y", "y"], q(), 6);
    let id = CoordinateChange::identity(q(), 2, 6);
    assert_eq!(CoordinateChange::compose(&id, &c).unwrap(), c);
    let d = change(&["x", "y + x"], q(), 6);
    let cd = CoordinateChange::compose(&c, &d).unwrap();
    assert_eq!(cd.components()[0], s("2x + y", 2, q(), 6));
    // apply(compose(o, i), f) = apply(i, apply(o, f))
    let f = s("x^2 y + y^3", 2, q(), 6);
    assert_eq!(cd.apply(&f).unwrap(), d.apply(&c.apply(&f).unwrap()).unwrap());
}

#[test]
fn inverse_examples() {
    let id = CoordinateChange::identity(q(), 3, 10);
    assert_eq!(id.inverse(), id);
    let c = change(&["2x"], q(), 10);
    assert_eq!(c.inverse(), change(&["1/2 x"], q(), 10));
    let c = change(&["x + y^2", "y"], q(), 10);
    let ci = c.inverse();
    assert_eq!(ci, change(&["x - y^2", "y"], q(), 10));
    assert!(CoordinateChange::compose(&c, &ci).unwrap().is_identity());
    assert!(CoordinateChange::compose(&ci, &c).unwrap().is_identity());
}

#[test]
fn rejects_bad_components() {
    let e = CoordinateChange::new(vec![s("1 + x", 2, q(), 4), s("y", 2, q(), 4)]).unwrap_err();
    assert_eq!(e, ChartError::NotInMaximalIdeal(0));
    let e = CoordinateChange::new(vec![s("x + y", 2, q(), 4), s("2x + 2y", 2, q(), 4)]).unwrap_err();
    assert_eq!(e, ChartError::SingularLinearPart);
    let e = CoordinateChange::new(vec![s("x^2", 2, q(), 4), s("y", 2, q(), 4)]).unwrap_err();
    assert_eq!(e, ChartError::SingularLinearPart);
}

#[test]
fn random_change_examples() {
    let c = random_change(7, q(), 3, 8, 1);
    assert!(c.components().iter().all(|x| x.terms().iter().all(|(m, _)| m.degree() == 1)));
    assert_eq!(linalg::rank(&c.linear_part()), 3);
    assert_eq!(random_change(11, fp(101), 3, 8, 4), random_change(11, fp(101), 3, 8, 4));
    let x1 = Series::var(fp(101), 3, 8, 0);
    assert_eq!(random_change(3, fp(101), 3, 8, 4).apply(&x1).unwrap().order(), Order::Finite(1));
}

fn field_strategy() -> impl Strategy<Value = adeclass::FieldSpec> {
    prop_oneof![Just(q()), Just(fp(3)), Just(fp(7)), Just(fp(10007))]
}

fn poly_strategy(n: usize, prec: u32) -> impl Strategy<Value = (adeclass::FieldSpec, u64, u64, u64)> {
    let _ = (n, prec);
    (field_strategy(), any::<u64>(), any::<u64>(), any::<u64>())
}

fn random_poly(seed: u64, field: adeclass::FieldSpec, n: usize, prec: u32, min_deg: u32, max_deg: u32) -> Series {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let terms = adeclass::series::monomials_up_to(n, max_deg)
        .into_iter()
        .filter(|m| m.degree() >= min_deg)
        .filter_map(|m| rng.gen_bool(0.3).then(|| (m, field.random(&mut rng))))
        .collect::<Vec<_>>();
    Series::from_terms(field, n, prec, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn apply_is_ring_homomorphism((field, a, b, c) in poly_strategy(3, 7)) {
        let ch = random_change(c, field, 3, 7, 3);
        let f = random_poly(a, field, 3, 7, 0, 4);
        let g = random_poly(b, field, 3, 7, 0, 4);
        let prod = ch.apply(&f.mul(&g).unwrap()).unwrap();
        prop_assert_eq!(prod, ch.apply(&f).unwrap().mul(&ch.apply(&g).unwrap()).unwrap());
        let sum = ch.apply(&f.add(&g).unwrap()).unwrap();
        prop_assert_eq!(sum, ch.apply(&f).unwrap().add(&ch.apply(&g).unwrap()).unwrap());
    }

    #[test]
    fn inverse_round_trip((field, _a, _b, c) in poly_strategy(3, 8)) {
        // dense changes over ℚ have large coefficients; keep those small
        let n = if field.is_rational() { 2 } else { 3 };
        let ch = random_change(c, field, n, 8, 4);
        let inv = ch.inverse();
        prop_assert!(CoordinateChange::compose(&ch, &inv).unwrap().is_identity());
        prop_assert!(CoordinateChange::compose(&inv, &ch).unwrap().is_identity());
    }

    #[test]
    fn order_is_preserved((field, a, _b, c) in poly_strategy(2, 9), lo in 1u32..6) {
        let ch = random_change(c, field, 2, 9, 3);
        let f = random_poly(a, field, 2, 9, lo, 7);
        prop_assert_eq!(ch.apply(&f).unwrap().order(), f.order());
    }
}
