mod common;

use adeclass::classify::Verdict;
use adeclass::mfact::*;
use adeclass::series::random_series;
use adeclass::Series;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;

const N: u32 = 12;

fn m(rows: &[&[&str]], n: usize, p: u64) -> SeriesMatrix {
    rows.iter().map(|r| r.iter().map(|t| s(t, n, fp(p), N)).collect()).collect()
}

fn mf(eq: &str, phi: &[&[&str]], psi: &[&[&str]], n: usize, p: u64) -> MatrixFactorization {
    MatrixFactorization::new(s(eq, n, fp(p), N), m(phi, n, p), m(psi, n, p))
}

fn y_y2() -> MatrixFactorization {
    mf("y^3", &[&["y"]], &[&["y^2"]], 2, 7)
}

#[test]
fn verify_examples() {
    assert!(verify_mf(&y_y2()).unwrap());
    let sq = mf("y^2", &[&["0", "y"], &["-y", "0"]], &[&["0", "-y"], &["y", "0"]], 2, 7);
    assert!(verify_mf(&sq).unwrap());
    let not_reduced = mf("y^3", &[&["1"]], &[&["y^3"]], 2, 7);
    assert!(!verify_mf(&not_reduced).unwrap());
    let bad_shape = mf("y^3", &[&["y", "y"]], &[&["y^2", "y"]], 2, 7);
    assert!(matches!(verify_mf(&bad_shape), Err(MfError::Shape(_))));
}

#[test]
fn swap_is_an_involution() {
    let a = y_y2();
    let b = syzygy_swap(&a);
    assert_eq!(b.phi, m(&[&["y^2"]], 2, 7));
    assert!(verify_mf(&b).unwrap());
    assert_eq!(syzygy_swap(&b), a);
}

#[test]
fn sharp_block_shape() {
    let sh = knorrer_sharp(&y_y2(), 0).unwrap();
    assert_eq!(sh.phi, m(&[&["y^2", "-x"], &["x", "y"]], 2, 7));
    assert_eq!(sh.psi, m(&[&["y", "x"], &["-x", "y^2"]], 2, 7));
    assert_eq!(sh.equation, s("x^2 + y^3", 2, fp(7), N));
    assert!(verify_mf(&sh).unwrap());
    assert!(matches!(knorrer_sharp(&y_y2(), 1), Err(MfError::VariableCollision(1))));
}

#[test]
fn sharp_twice_in_three_variables() {
    let seed = mf("y^3", &[&["y"]], &[&["y^2"]], 3, 7);
    let once = knorrer_sharp(&seed, 0).unwrap();
    let twice = knorrer_sharp(&once, 2).unwrap();
    assert_eq!(twice.size(), (4, 4));
    assert_eq!(twice.equation, s("x^2 + y^3 + z^2", 3, fp(7), N));
    assert!(verify_mf(&twice).unwrap());
}

#[test]
fn flat_of_sharp_splits() {
    let base = y_y2();
    let (first, second) = knorrer_flat(&knorrer_sharp(&base, 0).unwrap(), 0).unwrap();
    assert_eq!(first, syzygy_swap(&base));
    assert_eq!(second, base);
}

#[test]
fn flat_of_a_one_by_one_factorization_is_flagged() {
    // (x + 2y)(x − 2y) = x² + y² over 𝔽₅
    let lin = mf("x^2 + y^2", &[&["x + 2*y"]], &[&["x - 2*y"]], 2, 5);
    assert!(verify_mf(&lin).unwrap());
    assert_eq!(knorrer_flat(&lin, 0), Err(MfError::NotBlockDiagonal));
}

#[test]
fn roots() {
    let a = root_to_mf(&m(&[&["0", "y"], &["-y", "0"]], 2, 7), 0).unwrap();
    assert_eq!(a.equation, s("x^2 + y^2", 2, fp(7), N));
    assert!(verify_mf(&a).unwrap());
    let b = root_to_mf(&m(&[&["0", "y^2"], &["-y", "0"]], 2, 7), 0).unwrap();
    assert_eq!(b.equation, s("x^2 + y^3", 2, fp(7), N));
    assert!(verify_mf(&b).unwrap());
    assert!(matches!(root_to_mf(&m(&[&["0", "0"], &["0", "0"]], 2, 7), 0), Err(MfError::RootIdentity(_))));
    assert!(matches!(root_to_mf(&m(&[&["y", "0"], &["0", "y^2"]], 2, 7), 0), Err(MfError::RootIdentity(_))));
    assert!(matches!(root_to_mf(&m(&[&["0", "x"], &["-x", "0"]], 2, 7), 0), Err(MfError::VariableCollision(0))));
}

#[test]
fn half_conjugation() {
    for phi in [m(&[&["0", "y"], &["-y", "0"]], 2, 7), m(&[&["0", "y^2"], &["-y", "0"]], 2, 7)] {
        assert_eq!(flat_sharp_conjugate(&phi, 0).unwrap(), rootable_diagonal(&phi, 0).unwrap());
    }
}

#[test]
fn self_syzygy_witness() {
    for base in [y_y2(), mf("y^3", &[&["y"]], &[&["y^2"]], 2, 7)] {
        let sh = knorrer_sharp(&base, 0).unwrap();
        let w = sharp_self_syzygy_witness(&base).unwrap();
        assert!(check_equivalence(&syzygy_swap(&sh), &sh, &w).unwrap());
    }
    // rectangular blocks: 2×2 seed sharpened
    let e6 = standard_mf(&Verdict::E6, 3, fp(7), N).unwrap();
    let seed = standard_mf(&Verdict::E6, 2, fp(7), N).unwrap();
    let seed3 = MatrixFactorization::new(
        e6.equation.filter(|mm| mm.exp(2) == 0),
        seed.phi.iter().map(|r| r.iter().map(|x| x.embed(3, &[0, 1])).collect()).collect(),
        seed.psi.iter().map(|r| r.iter().map(|x| x.embed(3, &[0, 1])).collect()).collect(),
    );
    let w = sharp_self_syzygy_witness(&seed3).unwrap();
    assert!(check_equivalence(&syzygy_swap(&e6), &e6, &w).unwrap());
}

#[test]
fn identity_witness_and_non_witness() {
    let sh = knorrer_sharp(&y_y2(), 0).unwrap();
    let one = s("1", 2, fp(7), N);
    let id = scalar_matrix(&one, 2);
    assert!(check_equivalence(&sh, &sh, &EquivalenceWitness { alpha: id.clone(), beta: id.clone() }).unwrap());
    let bogus = m(&[&["1", "2"], &["3", "1 + x"]], 2, 7);
    assert!(!check_equivalence(&sh, &sh, &EquivalenceWitness { alpha: bogus, beta: id }).unwrap());
}

#[test]
fn entry_ideals() {
    let a = ideal_of_entries(&y_y2());
    assert_eq!(a.generators.len(), 2);
    assert!(a.certifies(&s("y^3", 2, fp(7), N)));
    let sh = knorrer_sharp(&y_y2(), 0).unwrap();
    let b = ideal_of_entries(&sh);
    assert!(b.certifies(&sh.equation));
}

#[test]
fn catalog_verifies() {
    for p in [3u64, 5, 7, 11] {
        for row in catalog_rows(p, 8) {
            for n in 1..=4 {
                match standard_mf(&row, n, fp(p), N) {
                    Ok(f) => {
                        assert!(verify_mf(&f).unwrap(), "{} n={n} p={p}", row.label());
                        assert!(ideal_of_entries(&f).certifies(&f.equation));
                    }
                    Err(MfError::Unsupported(_)) => assert!(n == 1 && !matches!(row, Verdict::A(_))),
                    Err(e) => panic!("{} n={n} p={p}: {e}", row.label()),
                }
            }
        }
    }
    let a2 = standard_mf(&Verdict::A(2), 1, fp(7), N).unwrap();
    assert_eq!((a2.phi[0][0].clone(), a2.psi[0][0].clone()), (s("x", 1, fp(7), N), s("x^2", 1, fp(7), N)));
    assert!(standard_mf(&Verdict::E6_1, 2, fp(7), N).is_err());
    assert!(standard_mf(&Verdict::AAtLeast(16), 2, fp(7), N).is_err());
}

fn random_root(seed: u64) -> SeriesMatrix {
    // [[a, b], [c, −a]] squares to (a² + bc)·𝟙; variables y, z (b = x is free)
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let f = fp(7);
    let mut e = || random_series(&mut rng, f, 3, N, 1, 3).filter(|mm| mm.exp(0) == 0);
    let (a, b, c) = (e(), e(), e());
    vec![vec![a.clone(), b], vec![c, a.neg()]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_give_factorizations(seed in any::<u64>()) {
        let phi = random_root(seed);
        match root_to_mf(&phi, 0) {
            Ok(f) => {
                prop_assert!(verify_mf(&f).unwrap());
                prop_assert_eq!(flat_sharp_conjugate(&phi, 0).unwrap(), rootable_diagonal(&phi, 0).unwrap());
            }
            Err(MfError::RootIdentity(_)) => {
                let sq = mat_mul(&phi, &phi).unwrap();
                prop_assert!(sq[0][0].is_zero());
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn sharp_preserves_verification(seed in any::<u64>()) {
        let phi = random_root(seed);
        prop_assume!(!mat_mul(&phi, &phi).unwrap()[0][0].is_zero());
        // root factorization of x² + g, then sharpen with a fourth variable
        let lift = |mm: &SeriesMatrix| -> SeriesMatrix {
            mm.iter().map(|r| r.iter().map(|x: &Series| x.embed(4, &[0, 1, 2])).collect()).collect()
        };
        let f = root_to_mf(&phi, 0).unwrap();
        let f4 = MatrixFactorization::new(f.equation.embed(4, &[0, 1, 2]), lift(&f.phi), lift(&f.psi));
        let sh = knorrer_sharp(&f4, 3).unwrap();
        prop_assert!(verify_mf(&sh).unwrap());
        let (a, b) = knorrer_flat(&sh, 3).unwrap();
        prop_assert_eq!(a, syzygy_swap(&f4));
        prop_assert_eq!(b, f4);
    }
}
