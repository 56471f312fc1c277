//! Classify a handful of germs over several fields and print the verdicts.
//!
//!     cargo run --example classify_polynomials

use adeclass::cli::{parse_polynomial, render};
use adeclass::{classify, FieldSpec};

fn main() {
    let vars: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
    let f7 = FieldSpec::prime(7).unwrap();
    let cases = [
        ("x^2 + y^3", 2, f7),
        ("x^2 + y^2 + z^6", 3, f7),
        ("x*y^2 + x^5", 2, f7),
        ("(x + y^2)^3 + y^5 + x*y^4", 2, f7),
        ("(x + y^2)^3 + x*y^5", 2, f7),
        ("x^3 + x*y^3", 2, FieldSpec::rationals()),
        ("x^3 + y^5", 2, FieldSpec::prime(11).unwrap()),
        ("x^4 + y^4", 2, f7),
        // needs √−1 to reach x(y² + x²)
        ("x*y*(x + y)", 2, f7),
        ("x^2*y", 2, f7),
    ];
    for (text, n, field) in cases {
        let f = parse_polynomial(text, &vars[..n], field, 16).unwrap().series;
        let c = classify(&f).unwrap();
        print!("{text:28} over {:4} -> {}", field.to_string(), c.verdict);
        match c.certificate {
            Some(cert) => println!("   (normal form {})", render(&cert.normal_form, &vars[..n])),
            None => println!(),
        }
    }
}
