//! Hide a table form behind a random coordinate change and unit, recover
//! it, and check the certificate by plain substitution.
//!
//!     cargo run --release --example certificates

use adeclass::chart::random_change;
use adeclass::classify::normal_form;
use adeclass::cli::render;
use adeclass::series::random_unit;
use adeclass::{classify, verify_certificate, FieldSpec, Verdict};
use rand::SeedableRng;

fn main() {
    let field = FieldSpec::prime(11).unwrap();
    let vars: Vec<String> = ["x", "y"].map(String::from).to_vec();
    let prec = 10;
    let h = normal_form(&Verdict::E7, field, 2, prec).unwrap();
    let change = random_change(2024, field, 2, prec, 2);
    let unit = random_unit(&mut rand_chacha::ChaCha8Rng::seed_from_u64(7), field, 2, prec, 1);
    let g = change.apply(&h).unwrap().mul(&unit).unwrap();
    println!("disguised: {}", render(&g, &vars));

    let c = classify(&g).unwrap();
    let cert = c.certificate.expect("E7 has a normal form");
    println!("verdict:   {}", c.verdict);
    println!("unit:      {}", render(&cert.unit, &vars));
    for (v, comp) in vars.iter().zip(cert.change.components()) {
        println!("{v} ->      {}", render(comp, &vars));
    }
    // g(change) = unit · normal form, checked without rerunning the search
    println!("verified:  {}", verify_certificate(&g, &cert));

    let mut forged = cert.clone();
    forged.normal_form = normal_form(&Verdict::E6, field, 2, prec).unwrap();
    forged.verdict = Verdict::E6;
    println!("forged E6 certificate verified: {}", verify_certificate(&g, &forged));
}
