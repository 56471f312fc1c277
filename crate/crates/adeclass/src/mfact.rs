//! Matrix factorizations φ·ψ = f·𝟙, ψ·φ = f·𝟙 over the truncated series
//! ring, with the Knörrer ♯/♭ block constructions and rootable pairs
//! (b𝟙 − φ, b𝟙 + φ).
//!
//! Everything is checked as an exact matrix identity mod m^{N+1}; cokernel
//! modules are never built.

use crate::classify::Verdict;
use crate::field::FieldSpec;
use crate::series::{Monomial, Series, SeriesError};

pub type SeriesMatrix = Vec<Vec<Series>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MfError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("variable x{} already occurs in the factorization", .0 + 1)]
    VariableCollision(usize),
    #[error("root identity fails: {0}")]
    RootIdentity(String),
    #[error("b -> 0 limit is not block diagonal with factorizing blocks")]
    NotBlockDiagonal,
    #[error("no catalog factorization for {0}")]
    Unsupported(String),
    #[error("catalog factorization for {0} failed verification")]
    CatalogBroken(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// φ: a×b, ψ: b×a with φψ = f·𝟙ₐ and ψφ = f·𝟙_b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    pub equation: Series,
    pub phi: SeriesMatrix,
    pub psi: SeriesMatrix,
}

/// β φ₁ = φ₂ α and α ψ₁ = ψ₂ β, with α, β invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub alpha: SeriesMatrix,
    pub beta: SeriesMatrix,
}

// ---------------------------------------------------------------------
// Matrix helpers
// ---------------------------------------------------------------------

pub fn shape(m: &SeriesMatrix) -> (usize, usize) {
    (m.len(), m.first().map_or(0, |r| r.len()))
}

fn check_rect(m: &SeriesMatrix, what: &str) -> Result<(usize, usize), MfError> {
    let (r, c) = shape(m);
    if r == 0 || c == 0 || m.iter().any(|row| row.len() != c) {
        return Err(MfError::Shape(format!("{what} is not a nonempty rectangular matrix")));
    }
    Ok((r, c))
}

pub fn mat_mul(a: &SeriesMatrix, b: &SeriesMatrix) -> Result<SeriesMatrix, MfError> {
    let (ra, ca) = check_rect(a, "left factor")?;
    let (rb, cb) = check_rect(b, "right factor")?;
    if ca != rb {
        return Err(MfError::Shape(format!("{ra}x{ca} times {rb}x{cb}")));
    }
    let zero = a[0][0].zero_like();
    (0..ra)
        .map(|i| {
            (0..cb)
                .map(|j| (0..ca).try_fold(zero.clone(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])?)).map_err(MfError::from))
                .collect()
        })
        .collect()
}

/// s·𝟙ₖ.
pub fn scalar_matrix(s: &Series, k: usize) -> SeriesMatrix {
    let zero = s.zero_like();
    (0..k).map(|i| (0..k).map(|j| if i == j { s.clone() } else { zero.clone() }).collect()).collect()
}

fn map_entries(m: &SeriesMatrix, f: impl Fn(&Series) -> Series) -> SeriesMatrix {
    m.iter().map(|r| r.iter().map(&f).collect()).collect()
}

fn add_m(a: &SeriesMatrix, b: &SeriesMatrix) -> Result<SeriesMatrix, MfError> {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y).map_err(MfError::from)).collect()).collect()
}

/// [[a, b], [c, d]] from four blocks with matching sizes.
fn blocks(a: &SeriesMatrix, b: &SeriesMatrix, c: &SeriesMatrix, d: &SeriesMatrix) -> SeriesMatrix {
    let top = a.iter().zip(b).map(|(x, y)| x.iter().chain(y).cloned().collect());
    let bottom = c.iter().zip(d).map(|(x, y)| x.iter().chain(y).cloned().collect());
    top.chain(bottom).collect()
}

fn sub_block(m: &SeriesMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> SeriesMatrix {
    m[rows].iter().map(|r| r[cols.clone()].to_vec()).collect()
}

fn uses_var(m: &SeriesMatrix, b: usize) -> bool {
    m.iter().flatten().any(|s| s.terms().iter().any(|(mono, _)| mono.exp(b) > 0))
}

fn set_var_zero(s: &Series, b: usize) -> Series {
    s.filter(|m| m.exp(b) == 0)
}

fn is_reduced(m: &SeriesMatrix) -> bool {
    m.iter().flatten().all(|s| s.constant_term().is_zero())
}

// ---------------------------------------------------------------------
// Factorizations
// ---------------------------------------------------------------------

impl MatrixFactorization {
    pub fn new(equation: Series, phi: SeriesMatrix, psi: SeriesMatrix) -> Self {
        MatrixFactorization { equation, phi, psi }
    }

    /// (rows of φ, columns of φ).
    pub fn size(&self) -> (usize, usize) {
        shape(&self.phi)
    }

    pub fn nvars(&self) -> usize {
        self.equation.nvars()
    }
}

/// Both products equal f·𝟙 and every entry lies in m. Errors only on
/// incompatible shapes.
pub fn verify_mf(mf: &MatrixFactorization) -> Result<bool, MfError> {
    let (a, b) = check_rect(&mf.phi, "phi")?;
    let (pb, pa) = check_rect(&mf.psi, "psi")?;
    if (pb, pa) != (b, a) {
        return Err(MfError::Shape(format!("phi is {a}x{b} but psi is {pb}x{pa}")));
    }
    let ring = |s: &Series| s.nvars() == mf.equation.nvars() && s.field() == mf.equation.field();
    if !mf.phi.iter().chain(&mf.psi).flatten().all(ring) {
        return Err(MfError::Shape("entries live in a different ring than the equation".into()));
    }
    if !is_reduced(&mf.phi) || !is_reduced(&mf.psi) {
        return Ok(false);
    }
    let f = &mf.equation;
    Ok(mat_mul(&mf.phi, &mf.psi)? == scalar_matrix(f, a) && mat_mul(&mf.psi, &mf.phi)? == scalar_matrix(f, b))
}

/// (ψ, φ): the factorization presenting the first syzygy.
pub fn syzygy_swap(mf: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization { equation: mf.equation.clone(), phi: mf.psi.clone(), psi: mf.phi.clone() }
}

/// M♯ for b² + g: φ♯ = [[ψ, −b𝟙], [b𝟙, φ]], ψ♯ = [[φ, b𝟙], [−b𝟙, ψ]].
pub fn knorrer_sharp(mf: &MatrixFactorization, b: usize) -> Result<MatrixFactorization, MfError> {
    let (a, c) = check_rect(&mf.phi, "phi")?;
    let g = &mf.equation;
    if b >= g.nvars() {
        return Err(MfError::Shape(format!("variable index {b} out of range")));
    }
    if uses_var(&mf.phi, b) || uses_var(&mf.psi, b) || g.terms().iter().any(|(m, _)| m.exp(b) > 0) {
        return Err(MfError::VariableCollision(b));
    }
    let bv = Series::var(g.field(), g.nvars(), g.precision(), b);
    let nb = bv.neg();
    let phi = blocks(&mf.psi, &scalar_matrix(&nb, c), &scalar_matrix(&bv, a), &mf.phi);
    let psi = blocks(&mf.phi, &scalar_matrix(&bv, a), &scalar_matrix(&nb, c), &mf.psi);
    let equation = bv.mul(&bv)?.add(g)?;
    Ok(MatrixFactorization { equation, phi, psi })
}

/// M♭: set b = 0 and split the result into two diagonal blocks, each a
/// factorization of g = f|_{b=0}. For M♯ this returns (swap(M), M).
pub fn knorrer_flat(mf: &MatrixFactorization, b: usize) -> Result<(MatrixFactorization, MatrixFactorization), MfError> {
    let (r, c) = check_rect(&mf.phi, "phi")?;
    let g = set_var_zero(&mf.equation, b);
    let phi = map_entries(&mf.phi, |s| set_var_zero(s, b));
    let psi = map_entries(&mf.psi, |s| set_var_zero(s, b));
    let zero_block = |m: &SeriesMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
        m[rows].iter().all(|row| row[cols.clone()].iter().all(Series::is_zero))
    };
    for i in 1..r {
        for j in 1..c {
            let split = zero_block(&phi, 0..i, j..c)
                && zero_block(&phi, i..r, 0..j)
                && zero_block(&psi, 0..j, i..r)
                && zero_block(&psi, j..c, 0..i);
            if !split {
                continue;
            }
            let first = MatrixFactorization::new(g.clone(), sub_block(&phi, 0..i, 0..j), sub_block(&psi, 0..j, 0..i));
            let second = MatrixFactorization::new(g.clone(), sub_block(&phi, i..r, j..c), sub_block(&psi, j..c, i..r));
            if verify_mf(&first)? && verify_mf(&second)? {
                return Ok((first, second));
            }
        }
    }
    Err(MfError::NotBlockDiagonal)
}

/// (b𝟙 − φ, b𝟙 + φ) for b² + g, given φ² = −g·𝟙 with b not occurring in φ.
pub fn root_to_mf(phi: &SeriesMatrix, b: usize) -> Result<MatrixFactorization, MfError> {
    let (r, c) = check_rect(phi, "phi")?;
    if r != c {
        return Err(MfError::Shape(format!("root must be square, got {r}x{c}")));
    }
    let any = &phi[0][0];
    if b >= any.nvars() {
        return Err(MfError::Shape(format!("variable index {b} out of range")));
    }
    if uses_var(phi, b) {
        return Err(MfError::VariableCollision(b));
    }
    let sq = mat_mul(phi, phi)?;
    let g = sq[0][0].neg();
    if g.is_zero() {
        return Err(MfError::RootIdentity("phi^2 = 0, so g = 0".into()));
    }
    if sq != scalar_matrix(&sq[0][0], r) {
        return Err(MfError::RootIdentity("phi^2 is not a scalar matrix".into()));
    }
    let bv = Series::var(any.field(), any.nvars(), any.precision(), b);
    let bi = scalar_matrix(&bv, r);
    let neg = map_entries(phi, Series::neg);
    let mf = MatrixFactorization {
        equation: bv.mul(&bv)?.add(&g)?,
        phi: add_m(&bi, &neg)?,
        psi: add_m(&bi, phi)?,
    };
    if !verify_mf(&mf)? {
        return Err(MfError::RootIdentity("b*1 +- phi has entries outside the maximal ideal".into()));
    }
    Ok(mf)
}

/// ½·[[𝟙, 𝟙], [−𝟙, 𝟙]] · [[−φ, −b𝟙], [b𝟙, φ]] · [[𝟙, 𝟙], [−𝟙, 𝟙]], which
/// equals diag(b𝟙 − φ, b𝟙 + φ): the (N♭)♯ block form is conjugate to the
/// rootable pair.
pub fn flat_sharp_conjugate(phi: &SeriesMatrix, b: usize) -> Result<SeriesMatrix, MfError> {
    let (r, c) = check_rect(phi, "phi")?;
    if r != c {
        return Err(MfError::Shape(format!("root must be square, got {r}x{c}")));
    }
    let any = &phi[0][0];
    let field = any.field();
    let one = Series::one(field, any.nvars(), any.precision());
    let bv = Series::var(field, any.nvars(), any.precision(), b);
    let (i, ni) = (scalar_matrix(&one, r), scalar_matrix(&one.neg(), r));
    let p = blocks(&i, &i, &ni, &i);
    let neg = map_entries(phi, Series::neg);
    let m = blocks(&neg, &scalar_matrix(&bv.neg(), r), &scalar_matrix(&bv, r), phi);
    let half = field.from_i64(2).inv().expect("odd characteristic");
    Ok(map_entries(&mat_mul(&mat_mul(&p, &m)?, &p)?, |s| s.scale(&half)))
}

/// diag(b𝟙 − φ, b𝟙 + φ).
pub fn rootable_diagonal(phi: &SeriesMatrix, b: usize) -> Result<SeriesMatrix, MfError> {
    let mf = root_to_mf(phi, b)?;
    let r = phi.len();
    let zero = scalar_matrix(&phi[0][0].zero_like(), r);
    Ok(blocks(&mf.phi, &zero, &zero, &mf.psi))
}

/// β φ₁ ≡ φ₂ α and α ψ₁ ≡ ψ₂ β, with α, β invertible mod m.
pub fn check_equivalence(
    mf1: &MatrixFactorization,
    mf2: &MatrixFactorization,
    w: &EquivalenceWitness,
) -> Result<bool, MfError> {
    let (a, b) = check_rect(&mf1.phi, "phi1")?;
    if shape(&mf2.phi) != (a, b) || shape(&mf1.psi) != (b, a) || shape(&mf2.psi) != (b, a) {
        return Err(MfError::Shape("factorizations of different sizes".into()));
    }
    if shape(&w.beta) != (a, a) || shape(&w.alpha) != (b, b) {
        return Err(MfError::Shape(format!("witness must be {a}x{a} and {b}x{b}")));
    }
    let invertible = |m: &SeriesMatrix| {
        let c: crate::linalg::Matrix = m.iter().map(|r| r.iter().map(Series::constant_term).collect()).collect();
        crate::linalg::rank(&c) == c.len()
    };
    if !invertible(&w.alpha) || !invertible(&w.beta) {
        return Ok(false);
    }
    Ok(mat_mul(&w.beta, &mf1.phi)? == mat_mul(&mf2.phi, &w.alpha)?
        && mat_mul(&w.alpha, &mf1.psi)? == mat_mul(&mf2.psi, &w.beta)?)
}

/// Permutation witness between swap(M♯) and M♯ for M with φ of size a×c:
/// it exchanges the two row/column blocks.
pub fn sharp_self_syzygy_witness(mf: &MatrixFactorization) -> Result<EquivalenceWitness, MfError> {
    let (a, c) = check_rect(&mf.phi, "phi")?;
    let s = &mf.equation;
    let perm = |first: usize, second: usize| {
        // (P·X) puts rows first..first+second of X on top
        let n = first + second;
        let one = Series::one(s.field(), s.nvars(), s.precision());
        let zero = one.zero_like();
        (0..n)
            .map(|i| {
                let src = if i < second { first + i } else { i - second };
                (0..n).map(|j| if j == src { one.clone() } else { zero.clone() }).collect()
            })
            .collect::<SeriesMatrix>()
    };
    // rows of ψ♯ come in blocks (a, c); columns of φ♯ come in (a, c)
    let beta = perm(a, c);
    let alpha = transpose(&perm(a, c));
    Ok(EquivalenceWitness { alpha, beta })
}

pub fn transpose(m: &SeriesMatrix) -> SeriesMatrix {
    let (r, c) = shape(m);
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

/// Generators of the ideal of entries, and f as an explicit sum of
/// products of two entries: f = Σⱼ φ₀ⱼ ψⱼ₀, hence f ∈ I².
#[derive(Debug, Clone)]
pub struct EntryIdeal {
    pub generators: Vec<Series>,
    pub products: Vec<(Series, Series)>,
}

impl EntryIdeal {
    /// Σ products == f with every factor among the generators.
    pub fn certifies(&self, f: &Series) -> bool {
        let Ok(sum) = self.products.iter().try_fold(f.zero_like(), |acc, (p, q)| acc.add(&p.mul(q)?)) else {
            return false;
        };
        sum == *f && self.products.iter().all(|(p, q)| self.generators.contains(p) && self.generators.contains(q))
    }
}

pub fn ideal_of_entries(mf: &MatrixFactorization) -> EntryIdeal {
    let mut generators: Vec<Series> = Vec::new();
    for s in mf.phi.iter().chain(&mf.psi).flatten() {
        if !s.is_zero() && !generators.contains(s) {
            generators.push(s.clone());
        }
    }
    let products = (0..mf.psi.len())
        .map(|j| (mf.phi[0][j].clone(), mf.psi[j][0].clone()))
        .filter(|(p, q)| !p.is_zero() && !q.is_zero())
        .collect();
    EntryIdeal { generators, products }
}

// ---------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------

/// A verified factorization of `normal_form(verdict)` in n variables: a
/// seed in the core variables (x₁ for A, x₁, x₂ otherwise), doubled with
/// knorrer_sharp once per remaining square variable.
pub fn standard_mf(verdict: &Verdict, n: usize, field: FieldSpec, prec: u32) -> Result<MatrixFactorization, MfError> {
    let unsupported = || MfError::Unsupported(verdict.label());
    let x = |i: usize, e: u32| Series::monomial(field, n, prec, Monomial::var_pow(i, e), field.one());
    let sum = |parts: &[Series]| parts.iter().fold(Series::zero(field, n, prec), |a, s| a.add(s).expect("same ring"));
    let one_by_one = |p: Series, q: Series| -> Result<MatrixFactorization, MfError> {
        Ok(MatrixFactorization::new(p.mul(&q)?, vec![vec![p]], vec![vec![q]]))
    };
    // AD − BC with A = x₁, B = x₂, C = −x₂^m, D = x₁² + extra
    let det2 = |m: u32, extra: Series| -> Result<MatrixFactorization, MfError> {
        let (a, b, c, d) = (x(0, 1), x(1, 1), x(1, m).neg(), sum(&[x(0, 2), extra]));
        let f = a.mul(&d)?.sub(&b.mul(&c)?)?;
        let phi = vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]];
        let psi = vec![vec![d, b.neg()], vec![c.neg(), a]];
        Ok(MatrixFactorization::new(f, phi, psi))
    };
    let mono = |i: u32, j: u32| Series::monomial(field, n, prec, Monomial::new(&[i, j]), field.one());
    let (seed, core) = match *verdict {
        Verdict::A(k) if n >= 1 => (one_by_one(x(0, 1), x(0, k))?, 1),
        Verdict::D(k) if n >= 2 && k >= 4 => (one_by_one(x(0, 1), sum(&[x(1, 2), x(0, k - 2)]))?, 2),
        Verdict::E6 if n >= 2 => (det2(3, Series::zero(field, n, prec))?, 2),
        Verdict::E6_1 if n >= 2 => (det2(3, mono(1, 2))?, 2),
        Verdict::E7 if n >= 2 => (one_by_one(x(0, 1), sum(&[x(0, 2), x(1, 3)]))?, 2),
        Verdict::E7_1 if n >= 2 => (one_by_one(x(0, 1), sum(&[x(0, 2), x(1, 3), mono(1, 2)]))?, 2),
        Verdict::E8 if n >= 2 => (det2(4, Series::zero(field, n, prec))?, 2),
        Verdict::E8_1Char3 if n >= 2 => (det2(4, mono(1, 3))?, 2),
        Verdict::E8_2Char3 if n >= 2 => (det2(4, mono(1, 2))?, 2),
        Verdict::E8_1Char5 if n >= 2 => (det2(4, mono(0, 4))?, 2),
        _ => return Err(unsupported()),
    };
    if let Some(p) = verdict.required_characteristic() {
        if p != field.characteristic() {
            return Err(MfError::Unsupported(format!("{} outside characteristic {p}", verdict.label())));
        }
    }
    let mut mf = seed;
    for b in core..n {
        mf = knorrer_sharp(&mf, b)?;
    }
    let expected = crate::classify::normal_form(verdict, field, n, prec).ok_or_else(unsupported)?;
    if mf.equation != expected || !verify_mf(&mf)? {
        return Err(MfError::CatalogBroken(verdict.label()));
    }
    Ok(mf)
}

/// Table rows with a catalog factorization in characteristic p (p = 0 for ℚ).
pub fn catalog_rows(p: u64, max_index: u32) -> Vec<Verdict> {
    let mut rows: Vec<Verdict> = (1..=max_index).map(Verdict::A).collect();
    rows.extend((4..=max_index.max(4)).map(Verdict::D));
    rows.extend([Verdict::E6, Verdict::E7, Verdict::E8]);
    match p {
        3 => rows.extend([Verdict::E6_1, Verdict::E7_1, Verdict::E8_1Char3, Verdict::E8_2Char3]),
        5 => rows.push(Verdict::E8_1Char5),
        _ => {}
    }
    rows
}
