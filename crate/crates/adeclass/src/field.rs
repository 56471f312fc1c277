//! Exact coefficient fields: ℚ and 𝔽ₚ for odd primes p.
//!
//! Elements carry their field with them (`Elem::Fp` stores the modulus), so
//! arithmetic never needs a context argument. Mixing elements of different
//! fields is a programming error and panics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest accepted prime; keeps products of two residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic 2 is not supported: 2 must be invertible in the coefficient field")]
    CharTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound 2^31-1")]
    TooLarge(u64),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
}

/// Which field the coefficients live in, plus the "κ algebraically closed"
/// flag. The flag only changes which guards fire in the classifier; it never
/// touches arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    characteristic: u64,
    algebraically_closed: bool,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0, algebraically_closed: false }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharTwo);
        }
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec { characteristic: p, algebraically_closed: false })
    }

    pub fn with_closure_flag(mut self, flag: bool) -> Self {
        self.algebraically_closed = flag;
        self
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn algebraically_closed_assumed(&self) -> bool {
        self.algebraically_closed
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(&self) -> Elem {
        self.from_i64(0)
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match self.characteristic {
            0 => Elem::Q(BigRational::from_integer(BigInt::from(v))),
            p => Elem::Fp((v.rem_euclid(p as i64)) as u64, p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self.characteristic {
            0 => Elem::Q(BigRational::from_integer(v.clone())),
            p => {
                let r = v.mod_floor(&BigInt::from(p));
                Elem::Fp(r.to_u64().expect("residue fits"), p)
            }
        }
    }

    /// `num/den` reduced into the field; fails when `den` vanishes there.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Elem, FieldError> {
        let d = self.from_bigint(den);
        let inv = d.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(&self.from_bigint(num) * &inv)
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Elem, FieldError> {
        self.from_ratio(q.numer(), q.denom())
    }

    /// Smallest quadratic non-residue, for prime fields.
    pub fn nonsquare(&self) -> Option<Elem> {
        let p = self.characteristic;
        if p == 0 {
            return None;
        }
        (2..p).map(|v| Elem::Fp(v, p)).find(|e| !e.is_square())
    }

    /// A uniformly random element (rationals: small numerator/denominator).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.characteristic {
            0 => {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=4);
                Elem::Q(BigRational::new(n.into(), d.into()))
            }
            p => Elem::Fp(rng.gen_range(0..p), p),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "q"),
            p => write!(f, "fp:{p}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Elem {
    /// Residue `v` modulo the prime `p`, with `0 <= v < p`.
    Fp(u64, u64),
    Q(BigRational),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Fp(v, _) => *v == 0,
            Elem::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Elem::Fp(v, _) => *v == 1,
            Elem::Q(q) => q.is_one(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Elem::Fp(_, p) => *p,
            Elem::Q(_) => 0,
        }
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec { characteristic: self.characteristic(), algebraically_closed: false }
    }

    pub fn zero_like(&self) -> Elem {
        self.field().zero()
    }

    pub fn one_like(&self) -> Elem {
        self.field().one()
    }

    pub fn inv(&self) -> Option<Elem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Elem::Fp(v, p) => Elem::Fp(pow_mod(*v, *p - 2, *p), *p),
            Elem::Q(q) => Elem::Q(q.recip()),
        })
    }

    pub fn div(&self, other: &Elem) -> Option<Elem> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u64) -> Elem {
        match self {
            Elem::Fp(v, p) => Elem::Fp(pow_mod(*v, e, *p), *p),
            Elem::Q(q) => {
                let mut acc = BigRational::one();
                let mut base = q.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &base;
                    }
                    base = &base * &base;
                    e >>= 1;
                }
                Elem::Q(acc)
            }
        }
    }

    /// Integer power allowing negative exponents (fails only on 0^negative).
    pub fn powi(&self, e: i64) -> Option<Elem> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }

    pub fn is_square(&self) -> bool {
        match self {
            Elem::Fp(v, p) => *v == 0 || pow_mod(*v, (*p - 1) / 2, *p) == 1,
            Elem::Q(_) => self.sqrt().is_some(),
        }
    }

    /// A square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Elem> {
        self.nth_root(2)
    }

    /// Some `r` with `r^n = self`, if the field contains one.
    pub fn nth_root(&self, n: u64) -> Option<Elem> {
        assert!(n >= 1);
        if self.is_zero() || n == 1 {
            return Some(self.clone());
        }
        match self {
            Elem::Fp(v, p) => fp_nth_root(*v, n, *p).map(|r| Elem::Fp(r, *p)),
            Elem::Q(q) => {
                let neg = q.is_negative();
                if neg && n.is_multiple_of(2) {
                    return None;
                }
                let num = q.numer().abs();
                let den = q.denom().clone();
                let rn = exact_root(&num, n as u32)?;
                let rd = exact_root(&den, n as u32)?;
                let r = BigRational::new(rn, rd);
                Some(Elem::Q(if neg { -r } else { r }))
            }
        }
    }

    /// Canonical integer representative, symmetric for prime fields
    /// (so −1 prints as `-1` rather than `p-1`).
    pub fn to_rational_repr(&self) -> BigRational {
        match self {
            Elem::Fp(v, p) => {
                let s = if *v > *p / 2 { *v as i64 - *p as i64 } else { *v as i64 };
                BigRational::from_integer(BigInt::from(s))
            }
            Elem::Q(q) => q.clone(),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational_repr();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

fn same_field(a: &Elem, b: &Elem) -> u64 {
    let (pa, pb) = (a.characteristic(), b.characteristic());
    assert_eq!(pa, pb, "mixed coefficient fields");
    pa
}

impl<'a> Add<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn add(self, o: &Elem) -> Elem {
        same_field(self, o);
        match (self, o) {
            (Elem::Fp(a, p), Elem::Fp(b, _)) => {
                let s = a + b;
                Elem::Fp(if s >= *p { s - p } else { s }, *p)
            }
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn sub(self, o: &Elem) -> Elem {
        same_field(self, o);
        match (self, o) {
            (Elem::Fp(a, p), Elem::Fp(b, _)) => Elem::Fp(if a >= b { a - b } else { a + p - b }, *p),
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn mul(self, o: &Elem) -> Elem {
        same_field(self, o);
        match (self, o) {
            (Elem::Fp(a, p), Elem::Fp(b, _)) => Elem::Fp(a * b % p, *p),
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a * b),
            _ => unreachable!(),
        }
    }
}

/// Panics on division by zero; use [`Elem::div`] for the checked form.
impl<'a> Div<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn div(self, o: &Elem) -> Elem {
        Elem::div(self, o).expect("division by zero")
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        match self {
            Elem::Fp(0, p) => Elem::Fp(0, *p),
            Elem::Fp(a, p) => Elem::Fp(p - a, *p),
            Elem::Q(a) => Elem::Q(-a),
        }
    }
}

impl Add for Elem {
    type Output = Elem;
    fn add(self, o: Elem) -> Elem {
        &self + &o
    }
}

impl Sub for Elem {
    type Output = Elem;
    fn sub(self, o: Elem) -> Elem {
        &self - &o
    }
}

impl Mul for Elem {
    type Output = Elem;
    fn mul(self, o: Elem) -> Elem {
        &self * &o
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

// ===================================================================
// Prime-field helpers
// ===================================================================

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Tonelli–Shanks. `a` must be nonzero.
fn fp_sqrt(a: u64, p: u64) -> Option<u64> {
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

fn factor_small(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// q-th root for a prime q dividing p−1 (Adleman–Manders–Miller style:
/// correct a first guess inside the q-Sylow subgroup by a discrete log).
fn fp_prime_root(a: u64, q: u64, p: u64) -> Option<u64> {
    if !(p - 1).is_multiple_of(q) {
        let inv = mod_inverse(q % (p - 1), p - 1)?;
        return Some(pow_mod(a, inv, p));
    }
    if pow_mod(a, (p - 1) / q, p) != 1 {
        return None;
    }
    if q == 2 {
        return fp_sqrt(a, p);
    }
    let mut s = p - 1;
    let mut e = 0u32;
    while s.is_multiple_of(q) {
        s /= q;
        e += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / q, p) != 1)?;
    let c = pow_mod(z, s, p); // generator of the q-Sylow subgroup, order q^e
    let u = mod_inverse(q % s.max(1), s.max(1)).unwrap_or(0);
    let x = if s == 1 { 1 } else { pow_mod(a, u, p) };
    // b = x^q / a lies in the Sylow subgroup; find m with c^m = b^{-1}.
    let b = pow_mod(x, q, p) * pow_mod(a, p - 2, p) % p;
    let target = pow_mod(b, p - 2, p);
    let m = sylow_log(target, c, q, e, p)?;
    if m % q != 0 {
        return None;
    }
    let y = pow_mod(c, m / q, p);
    let r = x * y % p;
    debug_assert_eq!(pow_mod(r, q, p), a);
    Some(r)
}

/// Discrete log of `t` base `c`, where `c` has order q^e (Pohlig–Hellman).
fn sylow_log(t: u64, c: u64, q: u64, e: u32, p: u64) -> Option<u64> {
    let order = q.pow(e);
    let gamma = pow_mod(c, order / q, p); // order q
    let mut x: u64 = 0;
    let cinv = pow_mod(c, p - 2, p);
    for k in 0..e {
        let h = pow_mod(t * pow_mod(cinv, x, p) % p, q.pow(e - 1 - k), p);
        let d = (0..q).find(|&d| pow_mod(gamma, d, p) == h)?;
        x += d * q.pow(k);
    }
    Some(x)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

fn fp_nth_root(a: u64, n: u64, p: u64) -> Option<u64> {
    if p <= 4096 {
        return (1..p).find(|&r| pow_mod(r, n, p) == a);
    }
    nth_root_chain(a, &factor_small(n), p)
}

// Take prime roots one at a time; a wrong branch (e.g. −b² instead of b²
// on the way to a fourth root) is repaired by trying every q-th root of unity.
fn nth_root_chain(a: u64, qs: &[u64], p: u64) -> Option<u64> {
    let Some((&q, rest)) = qs.split_first() else {
        return Some(a);
    };
    let r0 = fp_prime_root(a, q, p)?;
    let zeta = if (p - 1).is_multiple_of(q) {
        let z = (2..p).find(|&z| pow_mod(z, (p - 1) / q, p) != 1)?;
        pow_mod(z, (p - 1) / q, p)
    } else {
        1
    };
    let mut r = r0;
    for _ in 0..q {
        if let Some(x) = nth_root_chain(r, rest, p) {
            return Some(x);
        }
        r = r * zeta % p;
    }
    None
}

fn exact_root(v: &BigInt, n: u32) -> Option<BigInt> {
    let r = v.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *v {
        Some(r)
    } else {
        None
    }
}

// ===================================================================
// Roots of small univariate polynomials
// ===================================================================

/// Roots in the field, with multiplicity, of `Σ coeffs[i] tⁱ` (degree ≤ 3
/// in practice). Prime fields use exhaustive search for small p and
/// Cantor–Zassenhaus splitting otherwise; ℚ uses the rational root test.
pub fn poly_roots(coeffs: &[Elem]) -> Vec<(Elem, usize)> {
    let mut c: Vec<Elem> = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let field = c[0].field();
    let candidates: Vec<Elem> = match field.characteristic() {
        0 => rational_root_candidates(&c),
        p if p <= 4096 => (0..p).map(|v| Elem::Fp(v, p)).collect(),
        _ => cz_roots(&c),
    };
    let mut out = Vec::new();
    for r in candidates {
        let mut m = 0;
        while c.len() > 1 && poly_eval(&c, &r).is_zero() {
            c = deflate(&c, &r);
            m += 1;
        }
        if m > 0 {
            out.push((r, m));
        }
    }
    out
}

pub fn poly_eval(c: &[Elem], t: &Elem) -> Elem {
    let mut acc = t.zero_like();
    for a in c.iter().rev() {
        acc = &(&acc * t) + a;
    }
    acc
}

/// Divide by (t − r), assuming r is a root.
fn deflate(c: &[Elem], r: &Elem) -> Vec<Elem> {
    let n = c.len() - 1;
    let mut q = vec![r.zero_like(); n];
    let mut carry = r.zero_like();
    for i in (0..n).rev() {
        carry = &(&carry * r) + &c[i + 1];
        q[i] = carry.clone();
    }
    q
}

fn rational_root_candidates(c: &[Elem]) -> Vec<Elem> {
    let qs: Vec<BigRational> = c
        .iter()
        .map(|e| match e {
            Elem::Q(q) => q.clone(),
            _ => unreachable!(),
        })
        .collect();
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut out = vec![Elem::Q(BigRational::zero())];
    let lo = ints.iter().find(|v| !v.is_zero()).cloned().unwrap_or_else(BigInt::one);
    let hi = ints.last().cloned().unwrap_or_else(BigInt::one);
    let (Some(dl), Some(dh)) = (divisors(&lo), divisors(&hi)) else {
        return out;
    };
    for a in &dl {
        for b in &dh {
            let r = BigRational::new(BigInt::from(*a), BigInt::from(*b));
            out.push(Elem::Q(r.clone()));
            out.push(Elem::Q(-r));
        }
    }
    out.sort_by_key(|x| x.to_rational_repr());
    out.dedup();
    out
}

fn divisors(v: &BigInt) -> Option<Vec<u64>> {
    let n = v.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    Some(out)
}

// Dense polynomials over 𝔽ₚ as coefficient vectors, low degree first.
type Px = Vec<u64>;

fn px_trim(mut a: Px) -> Px {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn px_rem(a: &Px, m: &Px, p: u64) -> Px {
    let mut a = px_trim(a.clone());
    let m = px_trim(m.clone());
    let lead_inv = pow_mod(*m.last().unwrap(), p - 2, p);
    while a.len() >= m.len() && !(a.len() == 1 && a[0] == 0) {
        let shift = a.len() - m.len();
        let f = a.last().unwrap() * lead_inv % p;
        for (i, mi) in m.iter().enumerate() {
            a[i + shift] = (a[i + shift] + p - f * mi % p) % p;
        }
        a = px_trim(a);
        if a.len() < m.len() {
            break;
        }
        if a.len() == 1 && a[0] == 0 {
            break;
        }
    }
    a
}

fn px_mulmod(a: &Px, b: &Px, m: &Px, p: u64) -> Px {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    px_rem(&out, m, p)
}

fn px_powmod(base: &Px, mut e: u64, m: &Px, p: u64) -> Px {
    let mut acc = vec![1u64];
    let mut b = px_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = px_mulmod(&acc, &b, m, p);
        }
        b = px_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn px_gcd(a: &Px, b: &Px, p: u64) -> Px {
    let (mut a, mut b) = (px_trim(a.clone()), px_trim(b.clone()));
    while !(b.len() == 1 && b[0] == 0) {
        let r = px_rem(&a, &b, p);
        a = b;
        b = r;
    }
    let inv = pow_mod(*a.last().unwrap(), p - 2, p);
    a.iter().map(|x| x * inv % p).collect()
}

fn px_sub(a: &Px, b: &Px, p: u64) -> Px {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    px_trim(out)
}

fn cz_roots(c: &[Elem]) -> Vec<Elem> {
    let p = c[0].characteristic();
    let f: Px = px_trim(c.iter().map(|e| if let Elem::Fp(v, _) = e { *v } else { 0 }).collect());
    // product of the distinct linear factors
    let xp = px_powmod(&vec![0, 1], p, &f, p);
    let g = px_gcd(&f, &px_sub(&xp, &vec![0, 1], p), p);
    let mut roots = Vec::new();
    let mut stack = vec![g];
    let mut delta = 1u64;
    while let Some(h) = stack.pop() {
        match h.len() {
            0 | 1 => {}
            2 => roots.push(Elem::Fp((p - h[0]) % p, p)),
            _ => {
                let mut split = None;
                while split.is_none() && delta < p {
                    let w = px_powmod(&vec![delta, 1], (p - 1) / 2, &h, p);
                    let d = px_gcd(&h, &px_sub(&w, &vec![1], p), p);
                    if d.len() > 1 && d.len() < h.len() {
                        split = Some(d);
                    }
                    delta += 1;
                }
                let Some(d) = split else { break };
                let q = px_div_exact(&h, &d, p);
                stack.push(d);
                stack.push(q);
            }
        }
    }
    roots
}

fn px_div_exact(a: &Px, b: &Px, p: u64) -> Px {
    let mut rem = a.clone();
    let inv = pow_mod(*b.last().unwrap(), p - 2, p);
    let n = a.len() - b.len() + 1;
    let mut q = vec![0u64; n];
    for k in (0..n).rev() {
        let f = rem[k + b.len() - 1] * inv % p;
        q[k] = f;
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] = (rem[k + i] + p - f * bi % p) % p;
        }
    }
    q
}
