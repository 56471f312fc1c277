//! Automorphisms of the truncated power series ring: apply, invert, compose.
//!
//!     cargo run --example coordinate_changes

use adeclass::chart::random_change;
use adeclass::cli::{parse_polynomial, render};
use adeclass::{CoordinateChange, FieldSpec};

fn main() {
    let field = FieldSpec::rationals();
    let vars: Vec<String> = ["x", "y"].map(String::from).to_vec();
    let p = |t: &str| parse_polynomial(t, &vars, field, 6).unwrap().series;

    let shear = CoordinateChange::new(vec![p("x + y^2"), p("y - 2*x*y")]).unwrap();
    let inv = shear.inverse();
    let back = CoordinateChange::compose(&shear, &inv).unwrap();
    println!("psi      = ({})", shear.components().iter().map(|c| render(c, &vars)).collect::<Vec<_>>().join(", "));
    println!("psi^-1   = ({})", inv.components().iter().map(|c| render(c, &vars)).collect::<Vec<_>>().join(", "));
    println!("psi∘psi^-1 is the identity: {}", back.is_identity());

    let f = p("x^2 + y^3");
    let g = shear.apply(&f).unwrap();
    println!("f∘psi    = {}", render(&g, &vars));
    println!("recovers f: {}", inv.apply(&g).unwrap() == f);

    let r = random_change(11, field, 2, 6, 2);
    println!("random change (seed 11): ({})", r.components().iter().map(|c| render(c, &vars)).collect::<Vec<_>>().join(", "));
}
