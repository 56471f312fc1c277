mod common;

use adeclass::series::{Order, SeriesError};
use adeclass::Series;
use common::{fp, q, s, show};

#[test]
fn add_examples() {
    let f = s("x", 2, q(), 10);
    assert!(f.add(&f.neg()).unwrap().is_zero());
    let g = s("x^2 + y", 2, q(), 10).add(&s("y", 2, q(), 10)).unwrap();
    assert_eq!(g, s("x^2 + 2y", 2, q(), 10));
    let h = s("x", 1, fp(3), 10).add(&s("2x", 1, fp(3), 10)).unwrap();
    assert!(h.is_zero());
}

#[test]
fn add_rejects_mismatched_variables() {
    let e = s("x", 1, q(), 4).add(&s("x", 2, q(), 4)).unwrap_err();
    assert_eq!(e, SeriesError::VarCountMismatch(1, 2));
}

#[test]
fn add_takes_min_precision() {
    let f = s("x", 1, q(), 4).add(&s("x^3", 1, q(), 2)).unwrap();
    assert_eq!(f.precision(), 2);
    assert_eq!(show(&f), "x");
}

#[test]
fn mul_examples() {
    let f = s("x+y", 2, q(), 10).mul(&s("x-y", 2, q(), 10)).unwrap();
    assert_eq!(f, s("x^2 - y^2", 2, q(), 10));
    let g = s("x^2", 1, q(), 2).mul(&s("x", 1, q(), 2)).unwrap();
    assert!(g.is_zero());
    let h = s("1+x", 1, q(), 3).mul(&s("1-x+x^2", 1, q(), 3)).unwrap();
    assert_eq!(h, s("1 + x^3", 1, q(), 3));
}

#[test]
fn order_examples() {
    assert_eq!(s("x^2 + y^3", 2, q(), 10).order(), Order::Finite(2));
    assert_eq!(Series::zero(q(), 2, 10).order(), Order::AbovePrecision);
    assert_eq!(s("5", 2, q(), 10).order(), Order::Finite(0));
}

#[test]
fn jet_examples() {
    let f = s("x^2 + y^3 + x^4", 2, q(), 10);
    assert_eq!(f.jet(3).unwrap(), s("x^2 + y^3", 2, q(), 3));
    assert_eq!(f.jet(10).unwrap(), f);
    assert_eq!(s("x^3 + x^2 y^2", 2, q(), 10).jet(3).unwrap(), s("x^3", 2, q(), 3));
    assert!(f.jet(11).is_err());
}

#[test]
fn unit_examples() {
    assert!(s("1 + x", 1, q(), 5).is_unit());
    assert!(!s("x", 1, q(), 5).is_unit());
    assert!(!Series::zero(q(), 1, 5).is_unit());
}

#[test]
fn invert_examples() {
    assert_eq!(s("1 - x", 1, q(), 3).invert_unit().unwrap(), s("1 + x + x^2 + x^3", 1, q(), 3));
    assert_eq!(s("4", 1, q(), 3).invert_unit().unwrap(), s("1/4", 1, q(), 3));
    let g = s("1 + x + y", 2, q(), 2).invert_unit().unwrap();
    assert_eq!(g, s("1 - x - y + x^2 + 2x y + y^2", 2, q(), 2));
    assert_eq!(s("x", 1, q(), 3).invert_unit().unwrap_err(), SeriesError::NotAUnit);
}

#[test]
fn sqrt_examples() {
    assert_eq!(s("1", 1, q(), 4).sqrt_unit().unwrap(), s("1", 1, q(), 4));
    assert_eq!(s("1 + x", 1, q(), 2).sqrt_unit().unwrap(), s("1 + 1/2 x - 1/8 x^2", 1, q(), 2));
    assert!(matches!(s("2", 1, fp(3), 4).sqrt_unit(), Err(SeriesError::RootNotInField(_))));
}

#[test]
fn substitute_examples() {
    let x2 = s("x^2", 2, q(), 8);
    let args = [s("x+y", 2, q(), 8), s("y", 2, q(), 8)];
    assert_eq!(x2.substitute(&args).unwrap(), s("x^2 + 2x y + y^2", 2, q(), 8));
    let f = s("x^3 y + 7y^5 - x", 2, q(), 8);
    let id = [s("x", 2, q(), 8), s("y", 2, q(), 8)];
    assert_eq!(f.substitute(&id).unwrap(), f);
    let x3 = s("x^3", 2, q(), 4);
    let args = [s("x + y^2", 2, q(), 4), s("y", 2, q(), 4)];
    assert_eq!(x3.substitute(&args).unwrap(), s("x^3 + 3x^2 y^2", 2, q(), 4));
    let bad = [s("1 + x", 2, q(), 4), s("y", 2, q(), 4)];
    assert_eq!(x3.substitute(&bad).unwrap_err(), SeriesError::ArgumentNotInMaximalIdeal(0));
}

#[test]
fn restrict_support_examples() {
    assert!(s("y^3", 2, q(), 5).restrict_support(&[1]));
    assert!(!s("x y", 2, q(), 5).restrict_support(&[1]));
    assert!(Series::zero(q(), 2, 5).restrict_support(&[]));
}
