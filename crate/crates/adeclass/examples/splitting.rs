//! Split off the nondegenerate quadratic part: after the change the germ is
//! Σ uᵢxᵢ² plus a residual in the remaining variables.
//!
//!     cargo run --example splitting

use adeclass::cli::{parse_polynomial, render};
use adeclass::split::split;
use adeclass::FieldSpec;

fn main() {
    let vars: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
    for (text, field) in [
        ("x^2 + 2*x*y + y^3 + z^2 + x*z^3", FieldSpec::prime(5).unwrap()),
        ("x*y + z^3 + x^2*z", FieldSpec::prime(7).unwrap()),
        ("x^2 + y^2 - z^2 + y*z^2 + z^4", FieldSpec::rationals()),
    ] {
        let f = parse_polynomial(text, &vars, field, 8).unwrap().series;
        let s = split(&f).unwrap();
        let units: Vec<String> = s.units.iter().map(ToString::to_string).collect();
        println!("{text}  over {field}");
        println!("  rank {}, units [{}]", s.rank, units.join(", "));
        println!("  residual {}", render(&s.residual, &vars));
        println!("  reconstruction exact: {}\n", s.change.apply(&f).unwrap() == s.reconstruction());
    }
}
