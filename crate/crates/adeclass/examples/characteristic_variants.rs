//! The same polynomial classified in different characteristics: in char 3
//! and char 5 some moduli survive that are removable elsewhere. An
//! Undetermined cell means the modulus is there but scaling its coefficient
//! to 1 needs a root the prime field lacks.
//!
//!     cargo run --release --example characteristic_variants

use adeclass::cli::parse_polynomial;
use adeclass::{classify, FieldSpec};

fn main() {
    let vars: Vec<String> = ["x", "y"].map(String::from).to_vec();
    let polys = ["x^3 + y^4 + x^2*y^2", "x^3 + x*y^3 + x^2*y^2", "x^3 + y^5 + x^2*y^2", "x^3 + y^5 + x^2*y^3", "x^3 + y^5 + x*y^4"];
    print!("{:24}", "");
    for p in [3, 5, 7] {
        print!("{:>14}", format!("F{p}"));
    }
    println!();
    for text in polys {
        print!("{text:24}");
        for p in [3u64, 5, 7] {
            let f = parse_polynomial(text, &vars, FieldSpec::prime(p).unwrap(), 16).unwrap().series;
            print!("{:>14}", classify(&f).unwrap().verdict.label());
        }
        println!();
    }
}
