//! The kernel: truncated power series over ℚ and 𝔽ₚ, with exact inverses,
//! square roots and precision tracking.
//!
//!     cargo run --example series_arithmetic

use adeclass::cli::{parse_polynomial, render};
use adeclass::field::poly_roots;
use adeclass::FieldSpec;

fn main() {
    let q = FieldSpec::rationals();
    let vars: Vec<String> = ["x", "y"].map(String::from).to_vec();
    let p = |t: &str, f: FieldSpec, n: u32| parse_polynomial(t, &vars, f, n).unwrap().series;

    let u = p("1 + x + y^2", q, 5);
    println!("1/(1 + x + y^2)  = {}", render(&u.invert_unit().unwrap(), &vars));
    println!("sqrt(1 + x + y^2) = {}", render(&u.sqrt_unit().unwrap(), &vars));

    // precision is the weakest of the operands
    let a = p("x + y", q, 3);
    let b = p("1 - x", q, 6);
    println!("(x + y)(1 - x) known mod m^{}", a.mul(&b).unwrap().precision() + 1);

    let f5 = FieldSpec::prime(5).unwrap();
    println!("sqrt(4 + x) over F5 = {}", render(&p("4 + x", f5, 4).sqrt_unit().unwrap(), &vars));
    println!("sqrt(2 + x) over F5: {}", p("2 + x", f5, 4).sqrt_unit().unwrap_err());

    // t³ − t over F7: roots 0, 1, −1
    let f7 = FieldSpec::prime(7).unwrap();
    let coeffs = [0, -1, 0, 1].map(|c| f7.from_i64(c));
    let roots: Vec<String> = poly_roots(&coeffs).into_iter().map(|(r, m)| format!("{r} (mult {m})")).collect();
    println!("roots of t^3 - t over F7: {}", roots.join(", "));
}
