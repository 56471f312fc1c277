#![allow(dead_code)]

use adeclass::cli::{parse_polynomial, render};
use adeclass::{FieldSpec, Series};

pub fn names(n: usize) -> Vec<String> {
    ["x", "y", "z", "w", "u", "v", "s", "t"][..n].iter().map(|s| s.to_string()).collect()
}

pub fn q() -> FieldSpec {
    FieldSpec::rationals()
}

pub fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// Parse in variables x, y, z, … (the first `n`).
pub fn s(text: &str, n: usize, field: FieldSpec, prec: u32) -> Series {
    parse_polynomial(text, &names(n), field, prec).unwrap().series
}

pub fn show(f: &Series) -> String {
    render(f, &names(f.nvars()))
}
