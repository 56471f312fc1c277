//! Polynomial text ⇄ `Series`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := [+|-] term ((+|-) term)*
//! term    := power ([*] power)*          juxtaposition multiplies: "1/2 x^2"
//! power   := primary [^ integer]
//! primary := integer [/ integer] | variable | ( expr )
//! ```

use crate::field::{Elem, FieldError, FieldSpec};
use crate::series::{render_with, Monomial, Series};
use num_bigint::BigInt;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("coefficient at {position} is not defined in the field: {source}")]
    Coefficient { position: usize, source: FieldError },
    #[error("exponent at {position} is too large")]
    ExponentTooLarge { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::Coefficient { position, .. }
            | ParseError::ExponentTooLarge { position } => *position,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub series: Series,
    /// Distinct monomials of degree > N that were discarded.
    pub dropped_terms: usize,
}

// Exact sparse polynomial used while parsing, so that truncation happens
// once at the end and the dropped-term count is honest.
type Poly = BTreeMap<Vec<u32>, Elem>;

const MAX_PARSE_DEGREE: u32 = 255;

pub fn parse_polynomial(text: &str, vars: &[String], field: FieldSpec, prec: u32) -> Result<Parsed, ParseError> {
    let mut p = Parser { s: text.as_bytes(), i: 0, vars, field };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.i < p.s.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    let n = vars.len();
    let mut dropped = 0;
    let terms: Vec<(Monomial, Elem)> = poly
        .into_iter()
        .filter(|(e, c)| {
            let keep = e.iter().sum::<u32>() <= prec;
            if !keep && !c.is_zero() {
                dropped += 1;
            }
            keep
        })
        .map(|(e, c)| (Monomial::new(&e), c))
        .collect();
    Ok(Parsed { series: Series::from_terms(field, n, prec, terms), dropped_terms: dropped })
}

/// Inverse of `parse_polynomial` for the given variable names.
pub fn render(f: &Series, vars: &[String]) -> String {
    render_with(f, vars)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    vars: &'a [String],
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { position: self.i, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn constant(&self, c: Elem) -> Poly {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.insert(vec![0; self.vars.len()], c);
        }
        p
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = Poly::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                -1
            }
            Some(b'+') => {
                self.i += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            add_into(&mut acc, &t, sign);
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.i += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    let rhs = self.power()?;
                    acc = mul_poly(&acc, &rhs, self.i)?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                    let rhs = self.power()?;
                    acc = mul_poly(&acc, &rhs, self.i)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.skip_ws();
            let pos = self.i;
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| ParseError::ExponentTooLarge { position: pos })?;
            if e > MAX_PARSE_DEGREE {
                return Err(ParseError::ExponentTooLarge { position: pos });
            }
            let mut acc = self.constant(self.field.one());
            for _ in 0..e {
                acc = mul_poly(&acc, &base, pos)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.syntax("expected an integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.i]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse"))
    }

    fn primary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let pos = self.i;
                let num = self.integer()?;
                let mut den = BigInt::from(1);
                if self.peek() == Some(b'/') {
                    self.i += 1;
                    self.skip_ws();
                    den = self.integer()?;
                }
                let c = self
                    .field
                    .from_ratio(&num, &den)
                    .map_err(|source| ParseError::Coefficient { position: pos, source })?;
                Ok(self.constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.i]).expect("ascii");
                let idx = self
                    .vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| ParseError::UnknownVariable { name: name.to_string(), position: start })?;
                let mut e = vec![0; self.vars.len()];
                e[idx] = 1;
                let mut p = Poly::new();
                p.insert(e, self.field.one());
                Ok(p)
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

fn add_into(acc: &mut Poly, t: &Poly, sign: i32) {
    for (e, c) in t {
        let c = if sign < 0 { -c } else { c.clone() };
        let entry = acc.entry(e.clone()).or_insert_with(|| c.zero_like());
        *entry = &*entry + &c;
        if entry.is_zero() {
            acc.remove(e);
        }
    }
}

fn mul_poly(a: &Poly, b: &Poly, pos: usize) -> Result<Poly, ParseError> {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() > MAX_PARSE_DEGREE {
                return Err(ParseError::ExponentTooLarge { position: pos });
            }
            let c = ca * cb;
            let entry = out.entry(e.clone()).or_insert_with(|| c.zero_like());
            *entry = &*entry + &c;
            if entry.is_zero() {
                out.remove(&e);
            }
        }
    }
    Ok(out)
}
