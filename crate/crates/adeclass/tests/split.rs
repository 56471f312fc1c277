mod common;

use adeclass::chart::random_change;
use adeclass::linalg::{mat_mul, rank, transpose, Matrix};
use adeclass::split::{corank, diagonalize_symmetric, gram_matrix, split, SplitError};
use adeclass::{Elem, FieldSpec, Order, Series};
use common::{fp, q, s};
use proptest::prelude::*;

fn mat(field: FieldSpec, rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect()
}

fn is_diagonal(d: &Matrix) -> bool {
    (0..d.len()).all(|i| (0..d.len()).all(|j| i == j || d[i][j].is_zero()))
}

#[test]
fn gram_examples() {
    assert_eq!(gram_matrix(&s("x^2 + 2x y + y^2", 2, q(), 6)).unwrap(), mat(q(), &[&[1, 1], &[1, 1]]));
    assert_eq!(gram_matrix(&s("x y", 2, fp(5), 6)).unwrap(), mat(fp(5), &[&[0, 3], &[3, 0]]));
    assert_eq!(gram_matrix(&s("x^3", 2, q(), 6)).unwrap(), mat(q(), &[&[0, 0], &[0, 0]]));
    assert_eq!(gram_matrix(&s("x + y^2", 2, q(), 6)).unwrap_err(), SplitError::OrderBelowTwo(1));
}

#[test]
fn diagonalize_examples() {
    let g = mat(q(), &[&[1, 1], &[1, 1]]);
    let (p, d) = diagonalize_symmetric(&g);
    assert_eq!(d, mat(q(), &[&[1, 0], &[0, 0]]));
    assert_eq!(mat_mul(&mat_mul(&transpose(&p), &g), &p), d);

    let g = mat(q(), &[&[3, 0, 0], &[0, -1, 0], &[0, 0, 5]]);
    let (p, d) = diagonalize_symmetric(&g);
    assert_eq!(p, mat(q(), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    assert_eq!(d, g);

    let g = mat(q(), &[&[0, 1], &[1, 0]]);
    let (p, d) = diagonalize_symmetric(&g);
    let half = q().from_i64(1).div(&q().from_i64(2)).unwrap();
    assert_eq!(d, vec![vec![q().from_i64(2), q().zero()], vec![q().zero(), -half]]);
    assert_eq!(mat_mul(&mat_mul(&transpose(&p), &g), &p), d);
}

#[test]
fn corank_examples() {
    assert_eq!(corank(&s("x^2 + y^2", 2, q(), 8)).unwrap(), 0);
    assert_eq!(corank(&s("x^2 + y^3", 2, q(), 8)).unwrap(), 1);
    assert_eq!(corank(&s("x^3 + y^4", 2, q(), 8)).unwrap(), 2);
}

#[test]
fn split_examples() {
    let f = s("x^2 + 2x y + y^2 + y^3", 2, q(), 8);
    let r = split(&f).unwrap();
    assert_eq!((r.rank, r.units.clone()), (1, vec![q().one()]));
    assert_eq!(r.residual, s("y^3", 2, q(), 8));
    assert_eq!(r.change.apply(&f).unwrap(), r.reconstruction());
    // the new first generator is x + y
    assert_eq!(r.change.inverse().components()[0], s("x + y", 2, q(), 8));

    let r = split(&s("x^2 + y^2", 2, q(), 8)).unwrap();
    assert_eq!(r.rank, 2);
    assert!(r.residual.is_zero());

    let f = s("x^2 + x y^2 + y^3", 2, q(), 6);
    let r = split(&f).unwrap();
    assert_eq!(r.rank, 1);
    assert_eq!(r.residual, s("y^3 - 1/4 y^4", 2, q(), 6));
    assert_eq!(r.change.apply(&f).unwrap(), r.reconstruction());
}

#[test]
fn split_rejects_wrong_order() {
    assert_eq!(split(&s("x + y^2", 2, q(), 6)).unwrap_err(), SplitError::OrderBelowTwo(1));
    assert_eq!(split(&s("x^3", 2, q(), 6)).unwrap_err(), SplitError::NoQuadraticPart);
}

fn random_order2(seed: u64, field: FieldSpec, n: usize, prec: u32) -> Series {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<_> = adeclass::series::monomials_up_to(n, 5)
        .into_iter()
        .filter(|m| m.degree() >= 2)
        .filter_map(|m| rng.gen_bool(0.4).then(|| (m, field.random(&mut rng))))
        .collect();
    let f = Series::from_terms(field, n, prec, terms);
    if f.order() == Order::Finite(2) {
        f
    } else {
        f.add(&Series::var(field, n, prec, 0).pow(2)).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagonalization_is_sound(seed in any::<u64>(), n in 1usize..5, p in prop_oneof![Just(0u64), Just(3), Just(5), Just(7)]) {
        use rand::SeedableRng;
        let field = if p == 0 { q() } else { fp(p) };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g: Matrix = vec![vec![field.zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let e: Elem = field.random(&mut rng);
                g[i][j] = e.clone();
                g[j][i] = e;
            }
        }
        let (pm, d) = diagonalize_symmetric(&g);
        prop_assert!(is_diagonal(&d));
        prop_assert_eq!(mat_mul(&mat_mul(&transpose(&pm), &g), &pm), d.clone());
        prop_assert_eq!(rank(&d), rank(&g));
        prop_assert_eq!(rank(&pm), n);
    }

    #[test]
    fn split_reconstructs(seed in any::<u64>(), n in 1usize..4, p in prop_oneof![Just(0u64), Just(5), Just(7)]) {
        let field = if p == 0 { q() } else { fp(p) };
        let f = random_order2(seed, field, n, 10);
        let r = split(&f).unwrap();
        prop_assert_eq!(r.change.apply(&f).unwrap(), r.reconstruction());
        let corank_vars: Vec<usize> = (r.rank..n).collect();
        prop_assert!(r.residual.restrict_support(&corank_vars));
        prop_assert!(r.residual.order() >= Order::Finite(3));
        prop_assert_eq!(n - r.rank, corank(&f).unwrap());
    }

    #[test]
    fn corank_is_invariant(seed in any::<u64>(), c in any::<u64>(), p in prop_oneof![Just(5u64), Just(7), Just(101)]) {
        let f = random_order2(seed, fp(p), 3, 8);
        let ch = random_change(c, fp(p), 3, 8, 3);
        prop_assert_eq!(corank(&ch.apply(&f).unwrap()).unwrap(), corank(&f).unwrap());
    }
}
