//! Matrix factorizations of the simple singularities: the catalog, Knörrer
//! doubling (sharp) and restriction (flat), and factorizations from roots.
//!
//!     cargo run --example matrix_factorizations

use adeclass::classify::Verdict;
use adeclass::cli::{parse_polynomial, render};
use adeclass::mfact::*;
use adeclass::FieldSpec;

fn show(m: &SeriesMatrix, vars: &[String]) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.iter().map(|e| render(e, vars)).collect::<Vec<_>>().join(", ")).collect();
    format!("[[{}]]", rows.join("], ["))
}

fn main() {
    let field = FieldSpec::prime(7).unwrap();
    let vars: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
    let p = |t: &str| parse_polynomial(t, &vars, field, 10).unwrap().series;

    let e6 = standard_mf(&Verdict::E6, 2, field, 10).unwrap();
    let v2 = &vars[..2];
    println!("E6: {} = phi*psi", render(&e6.equation, v2));
    println!("  phi = {}\n  psi = {}", show(&e6.phi, v2), show(&e6.psi, v2));

    // y³ = y·y², doubled twice into a 4×4 factorization of x² + y³ + z²
    let seed = MatrixFactorization::new(p("y^3"), vec![vec![p("y")]], vec![vec![p("y^2")]]);
    let once = knorrer_sharp(&seed, 0).unwrap();
    let twice = knorrer_sharp(&once, 2).unwrap();
    println!("sharp(sharp(y, y^2)): {:?} over {}, verified {}", twice.size(), render(&twice.equation, &vars), verify_mf(&twice).unwrap());

    let (first, second) = knorrer_flat(&once, 0).unwrap();
    println!("flat(sharp(M)) = (swap M, M): {}", first == syzygy_swap(&seed) && second == seed);

    // φ² = −(y² + z³)·𝟙 gives x² + y² + z³ = (x − φ)(x + φ)
    let phi = vec![vec![p("0"), p("y + z^2")], vec![p("-y + z"), p("0")]];
    let root = root_to_mf(&phi, 0).unwrap();
    println!("root_to_mf: {} , verified {}", render(&root.equation, &vars), verify_mf(&root).unwrap());
    println!("half-conjugation identity: {}", flat_sharp_conjugate(&phi, 0).unwrap() == rootable_diagonal(&phi, 0).unwrap());

    let rows = catalog_rows(7, 8);
    let ok = rows.iter().all(|v| verify_mf(&standard_mf(v, 3, field, 10).unwrap()).unwrap());
    println!("catalog over F7 in 3 variables ({} rows) verifies: {ok}", rows.len());
}
