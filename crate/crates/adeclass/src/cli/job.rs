//! Jobs behind the command-line front end. Every job produces a JSON value
//! (schema "ade-cert/1") or a text report, plus an exit code: 0 for
//! definite verdicts and passing checks, 2 for Undetermined, 1 for errors.

use super::poly::{parse_polynomial, render, ParseError};
use crate::chart::{random_change_with, CoordinateChange};
use crate::classify::{classify_over, normal_form, verify_certificate, Certificate, Classification, Verdict};
use crate::field::{FieldError, FieldSpec};
use crate::mfact::{knorrer_flat, knorrer_sharp, standard_mf, verify_mf, MatrixFactorization, SeriesMatrix};
use crate::series::{random_unit, Series};
use crate::split::split;
use rand::SeedableRng;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "ade-cert/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Split,
    Verify,
    MfBuild,
    MfSharp,
    MfFlat,
    MfVerify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Split => "split",
            Command::Verify => "verify",
            Command::MfBuild => "mf-build",
            Command::MfSharp => "mf-sharp",
            Command::MfFlat => "mf-flat",
            Command::MfVerify => "mf-verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub field: FieldSpec,
    pub precision: u32,
    /// Variable names; `None` infers them from the input.
    pub vars: Option<Vec<String>>,
    /// Polynomial text, or factorization JSON for mf-sharp/flat/verify.
    pub input: String,
    pub format: Format,
    pub seed: Option<u64>,
    /// verify: certificate JSON text.
    pub certificate: Option<String>,
    /// mf-build: table row label, e.g. "E6" or "A3".
    pub verdict: Option<String>,
    /// mf-sharp/mf-flat: the doubling variable.
    pub variable: Option<String>,
}

impl JobSpec {
    pub fn new(command: Command, field: FieldSpec, input: impl Into<String>) -> Self {
        JobSpec {
            command,
            field,
            precision: 16,
            vars: None,
            input: input.into(),
            format: Format::Json,
            seed: None,
            certificate: None,
            verdict: None,
            variable: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

/// A structured failure: `{error: code, message, location?}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobError {
    pub code: &'static str,
    pub message: String,
    pub location: Option<usize>,
}

impl JobError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        JobError { code, message: message.into(), location: None }
    }
}

impl From<ParseError> for JobError {
    fn from(e: ParseError) -> Self {
        JobError { code: "parse_error", message: e.to_string(), location: Some(e.position()) }
    }
}

/// "q" or "fp:<p>"; the optional suffix "+closed" sets the
/// algebraically-closed flag.
pub fn parse_field(text: &str) -> Result<FieldSpec, JobError> {
    let (base, closed) = match text.trim().strip_suffix("+closed") {
        Some(b) => (b, true),
        None => (text.trim(), false),
    };
    let field = if base == "q" || base == "Q" {
        FieldSpec::rationals()
    } else if let Some(p) = base.strip_prefix("fp:") {
        let p: u64 = p.parse().map_err(|_| JobError::new("bad_field", format!("'{p}' is not a prime")))?;
        FieldSpec::prime(p).map_err(|e| match e {
            FieldError::CharTwo => JobError::new("bad_field", "characteristic 2 is excluded: the classification assumes char != 2"),
            e => JobError::new("bad_field", e.to_string()),
        })?
    } else {
        return Err(JobError::new("bad_field", format!("unknown field '{text}' (use q or fp:<p>)")));
    };
    Ok(field.with_closure_flag(closed))
}

pub fn field_name(f: FieldSpec) -> String {
    let base = if f.is_rational() { "q".to_string() } else { format!("fp:{}", f.characteristic()) };
    if f.algebraically_closed_assumed() {
        base + "+closed"
    } else {
        base
    }
}

const PREFERRED: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "t"];

/// Identifiers in `text`, ordered x, y, z, w, u, v, s, t first, then
/// alphabetically. Falls back to ["x"] for constant input.
pub fn infer_vars(text: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphabetic() || ch == '_' || (!cur.is_empty() && ch.is_ascii_digit()) {
            cur.push(ch);
        } else if !cur.is_empty() {
            if !names.contains(&cur) {
                names.push(cur.clone());
            }
            cur.clear();
        }
    }
    let rank = |s: &String| PREFERRED.iter().position(|p| p == s).unwrap_or(PREFERRED.len());
    names.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
    if names.is_empty() {
        names.push("x".into());
    }
    names
}

fn check_vars(vars: &[String]) -> Result<(), JobError> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(JobError::new("bad_vars", format!("variable '{v}' listed twice")));
        }
    }
    if vars.is_empty() || vars.len() > crate::series::MAX_VARS {
        return Err(JobError::new("bad_vars", format!("between 1 and {} variables are supported", crate::series::MAX_VARS)));
    }
    Ok(())
}

struct Ctx {
    field: FieldSpec,
    prec: u32,
    vars: Vec<String>,
    warnings: Vec<String>,
}

impl Ctx {
    fn parse(&mut self, text: &str) -> Result<Series, JobError> {
        let p = parse_polynomial(text, &self.vars, self.field, self.prec)?;
        if p.dropped_terms > 0 {
            self.warnings.push(format!("{} terms of degree > {} dropped", p.dropped_terms, self.prec));
        }
        Ok(p.series)
    }

    fn show(&self, s: &Series) -> String {
        render(s, &self.vars)
    }

    fn change(&self, c: &CoordinateChange) -> Value {
        Value::Array(c.components().iter().map(|s| Value::String(self.show(s))).collect())
    }

    fn matrix(&self, m: &SeriesMatrix) -> Value {
        Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|s| Value::String(self.show(s))).collect())).collect())
    }

    fn header(&self, command: Command) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), command.name().into());
        m.insert("field".into(), field_name(self.field).into());
        m.insert("precision".into(), self.prec.into());
        m.insert("vars".into(), self.vars.clone().into());
        m
    }

    fn var_index(&self, name: &str) -> Result<usize, JobError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| JobError::new("bad_vars", format!("'{name}' is not among the variables")))
    }
}

/// Run one job.
pub fn run(job: &JobSpec) -> Outcome {
    let (value, code) = match run_value(job) {
        Ok(v) => v,
        Err(e) => (error_value(&e), 1),
    };
    let output = match job.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("serializable"),
        Format::Text => text_report(&value),
    };
    Outcome { exit_code: code, output }
}

/// Run a batch: one input per nonempty line, processed in parallel; the
/// output is JSON lines in input order. Exit code is 1 if any line failed,
/// else 2 if any was Undetermined, else 0.
pub fn run_batch(job: &JobSpec, lines: &str) -> Outcome {
    let inputs: Vec<&str> = lines.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(inputs.len().max(1));
    let mut results: Vec<Option<(Value, i32)>> = vec![None; inputs.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<_> = results.chunks_mut(inputs.len().div_ceil(threads).max(1)).collect();
        let mut start = 0;
        for chunk in chunks {
            let first = start;
            start += chunk.len();
            let inputs = &inputs;
            scope.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    let one = JobSpec { input: inputs[first + k].to_string(), ..job.clone() };
                    *slot = Some(run_value(&one).unwrap_or_else(|e| (error_value(&e), 1)));
                }
            });
        }
    });
    let mut code = 0;
    let mut out = String::new();
    for (v, c) in results.into_iter().flatten() {
        code = match (code, c) {
            (1, _) | (_, 1) => 1,
            (2, _) | (_, 2) => 2,
            _ => 0,
        };
        out.push_str(&serde_json::to_string(&v).expect("serializable"));
        out.push('\n');
    }
    Outcome { exit_code: code, output: out }
}

fn error_value(e: &JobError) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("error".into(), e.code.into());
    m.insert("message".into(), e.message.clone().into());
    if let Some(l) = e.location {
        m.insert("location".into(), l.into());
    }
    Value::Object(m)
}

fn run_value(job: &JobSpec) -> Result<(Value, i32), JobError> {
    if job.precision < 1 || job.precision > crate::series::MAX_PRECISION {
        return Err(JobError::new("bad_precision", format!("precision must be in 1..={}", crate::series::MAX_PRECISION)));
    }
    let vars = match (&job.vars, job.command) {
        (Some(v), _) => v.clone(),
        (None, Command::MfSharp | Command::MfFlat | Command::MfVerify) => mf_vars(&job.input)?,
        (None, Command::MfBuild) => PREFERRED[..2].iter().map(|s| s.to_string()).collect(),
        (None, _) => infer_vars(&job.input),
    };
    let mut vars = vars;
    // doubling introduces its variable if the factorization lacks it
    if let (Command::MfSharp, Some(b)) = (job.command, &job.variable) {
        if !vars.contains(b) {
            vars.push(b.clone());
        }
    }
    check_vars(&vars)?;
    let mut ctx = Ctx { field: job.field, prec: job.precision, vars, warnings: Vec::new() };
    match job.command {
        Command::Classify => classify_job(&mut ctx, job),
        Command::Split => split_job(&mut ctx, job),
        Command::Verify => verify_job(&mut ctx, job),
        Command::MfBuild => mf_build(&mut ctx, job),
        Command::MfSharp | Command::MfFlat | Command::MfVerify => mf_transform(&mut ctx, job),
    }
}

fn verdict_fields(m: &mut Map<String, Value>, v: &Verdict) {
    m.insert("verdict".into(), v.label().into());
    match v {
        Verdict::NotSimple(r) => {
            m.insert("reason".into(), r.code().into());
        }
        Verdict::Undetermined(r) => {
            m.insert("reason".into(), r.code().into());
            if let Some(d) = r.detail() {
                m.insert("detail".into(), d.into());
            }
        }
        _ => {}
    }
}

fn certificate_value(ctx: &Ctx, c: &Certificate) -> Value {
    json!({
        "verdict": c.verdict.label(),
        "normal_form": ctx.show(&c.normal_form),
        "change": ctx.change(&c.change),
        "unit": ctx.show(&c.unit),
        "precision": c.precision,
    })
}

fn classify_job(ctx: &mut Ctx, job: &JobSpec) -> Result<(Value, i32), JobError> {
    if ctx.prec < 3 {
        return Err(JobError::new("bad_precision", "classify needs precision >= 3"));
    }
    let f = ctx.parse(&job.input)?;
    let cls = classify_over(&f, ctx.field).map_err(|e| JobError::new("classify_error", e.to_string()))?;
    let mut m = ctx.header(Command::Classify);
    m.insert("input".into(), ctx.show(&f).into());
    verdict_fields(&mut m, &cls.verdict);
    m.insert("certificate".into(), cls.certificate.as_ref().map_or(Value::Null, |c| certificate_value(ctx, c)));
    if let Some(seed) = job.seed {
        m.insert("self_check".into(), self_check(ctx, &f, &cls, seed)?);
    }
    m.insert("warnings".into(), ctx.warnings.clone().into());
    let code = if cls.verdict.is_definite() { 0 } else { 2 };
    Ok((Value::Object(m), code))
}

/// Classify u·f(c) for a seeded random change c and unit u and compare.
fn self_check(ctx: &Ctx, f: &Series, cls: &Classification, seed: u64) -> Result<Value, JobError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = f.nvars();
    let c = random_change_with(&mut rng, ctx.field, n, ctx.prec, 2);
    let u = random_unit(&mut rng, ctx.field, n, ctx.prec, 2);
    let g = c.apply(f).map_err(|e| JobError::new("internal", e.to_string()))?;
    let g = g.mul(&u).map_err(|e| JobError::new("internal", e.to_string()))?;
    let other = classify_over(&g, ctx.field).map_err(|e| JobError::new("classify_error", e.to_string()))?;
    let verified = other.certificate.as_ref().is_none_or(|c| verify_certificate(&g, c));
    Ok(json!({
        "seed": seed,
        "verdict": other.verdict.label(),
        "agrees": other.verdict == cls.verdict,
        "certificate_verified": verified,
    }))
}

fn split_job(ctx: &mut Ctx, job: &JobSpec) -> Result<(Value, i32), JobError> {
    let f = ctx.parse(&job.input)?;
    let s = split(&f).map_err(|e| JobError::new("split_error", e.to_string()))?;
    let mut m = ctx.header(Command::Split);
    m.insert("input".into(), ctx.show(&f).into());
    m.insert("rank".into(), s.rank.into());
    m.insert("corank".into(), (f.nvars() - s.rank).into());
    m.insert("units".into(), s.units.iter().map(|u| u.to_string()).collect::<Vec<_>>().into());
    m.insert("change".into(), ctx.change(&s.change));
    m.insert("residual".into(), ctx.show(&s.residual).into());
    m.insert("warnings".into(), ctx.warnings.clone().into());
    Ok((Value::Object(m), 0))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str, JobError> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| JobError::new("bad_json", format!("missing string field '{key}'")))
}

fn verify_job(ctx: &mut Ctx, job: &JobSpec) -> Result<(Value, i32), JobError> {
    let text = job.certificate.as_deref().ok_or_else(|| JobError::new("usage", "verify needs a certificate"))?;
    let doc: Value = serde_json::from_str(text).map_err(|e| JobError::new("bad_json", e.to_string()))?;
    // accept either a full classify report or a bare certificate object
    let cert = doc.get("certificate").filter(|c| c.is_object()).unwrap_or(&doc);
    if let Some(vs) = doc.get("vars").and_then(Value::as_array) {
        if job.vars.is_none() {
            ctx.vars = vs.iter().filter_map(|v| v.as_str().map(String::from)).collect();
            check_vars(&ctx.vars)?;
        }
    }
    let f = ctx.parse(&job.input)?;
    let n = ctx.vars.len();
    let comps = cert
        .get("change")
        .and_then(Value::as_array)
        .ok_or_else(|| JobError::new("bad_json", "missing array field 'change'"))?
        .iter()
        .map(|c| c.as_str().ok_or_else(|| JobError::new("bad_json", "change entries must be strings")).and_then(|t| ctx.parse(t)))
        .collect::<Result<Vec<_>, _>>()?;
    if comps.len() != n {
        return Err(JobError::new("certificate_mismatch", format!("change has {} components for {n} variables", comps.len())));
    }
    let change = CoordinateChange::new(comps).map_err(|e| JobError::new("certificate_mismatch", e.to_string()))?;
    let verdict_label = str_field(cert, "verdict")?.to_string();
    let normal = ctx.parse(str_field(cert, "normal_form")?)?;
    let unit = ctx.parse(str_field(cert, "unit")?)?;
    let precision = cert.get("precision").and_then(Value::as_u64).unwrap_or(ctx.prec as u64) as u32;
    let verdict = parse_verdict(&verdict_label).ok_or_else(|| JobError::new("bad_json", format!("unknown verdict '{verdict_label}'")))?;
    let certificate = Certificate { verdict: verdict.clone(), normal_form: normal, change, unit, precision };
    let table_form = normal_form(&verdict, ctx.field, n, ctx.prec);
    let ok = verify_certificate(&f, &certificate) && table_form.as_ref() == Some(&certificate.normal_form);
    if !ok {
        return Err(JobError::new("certificate_mismatch", format!("certificate does not witness {verdict_label} for the input")));
    }
    let mut m = ctx.header(Command::Verify);
    m.insert("input".into(), ctx.show(&f).into());
    m.insert("verdict".into(), verdict_label.into());
    m.insert("verified".into(), true.into());
    m.insert("warnings".into(), ctx.warnings.clone().into());
    Ok((Value::Object(m), 0))
}

/// Inverse of `Verdict::label` for verdicts that have normal forms.
pub fn parse_verdict(label: &str) -> Option<Verdict> {
    let num = |s: &str| s.parse::<u32>().ok();
    let arg = |prefix: &str| label.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')).and_then(num);
    Some(match label {
        "Regular" => Verdict::Regular,
        "E6" => Verdict::E6,
        "E6_1" => Verdict::E6_1,
        "E7" => Verdict::E7,
        "E7_1" => Verdict::E7_1,
        "E8" => Verdict::E8,
        "E8_1_char3" => Verdict::E8_1Char3,
        "E8_2_char3" => Verdict::E8_2Char3,
        "E8_1_char5" => Verdict::E8_1Char5,
        _ if label.starts_with("A_at_least(") => Verdict::AAtLeast(arg("A_at_least(")?),
        _ if label.starts_with("D_at_least(") => Verdict::DAtLeast(arg("D_at_least(")?),
        _ if label.starts_with('A') => Verdict::A(num(&label[1..]).filter(|&k| k >= 1)?),
        _ if label.starts_with('D') => Verdict::D(num(&label[1..]).filter(|&k| k >= 4)?),
        _ => return None,
    })
}

fn mf_value(ctx: &Ctx, mf: &MatrixFactorization) -> Result<Value, JobError> {
    let verified = verify_mf(mf).map_err(|e| JobError::new("mf_error", e.to_string()))?;
    Ok(json!({
        "equation": ctx.show(&mf.equation),
        "phi": ctx.matrix(&mf.phi),
        "psi": ctx.matrix(&mf.psi),
        "verified": verified,
    }))
}

fn mf_build(ctx: &mut Ctx, job: &JobSpec) -> Result<(Value, i32), JobError> {
    let label = job.verdict.as_deref().ok_or_else(|| JobError::new("usage", "mf-build needs a verdict"))?;
    let v = parse_verdict(label).ok_or_else(|| JobError::new("usage", format!("unknown verdict '{label}'")))?;
    let mf = standard_mf(&v, ctx.vars.len(), ctx.field, ctx.prec).map_err(|e| JobError::new("mf_error", e.to_string()))?;
    let mut m = ctx.header(Command::MfBuild);
    m.insert("verdict".into(), label.into());
    m.insert("factorization".into(), mf_value(ctx, &mf)?);
    Ok((Value::Object(m), 0))
}

/// Variables of a factorization document (its "vars" field).
fn mf_vars(text: &str) -> Result<Vec<String>, JobError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| JobError::new("bad_json", e.to_string()))?;
    let vs = doc.get("vars").and_then(Value::as_array).ok_or_else(|| JobError::new("bad_json", "missing 'vars'"))?;
    Ok(vs.iter().filter_map(|v| v.as_str().map(String::from)).collect())
}

fn read_mf(ctx: &mut Ctx, text: &str) -> Result<MatrixFactorization, JobError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| JobError::new("bad_json", e.to_string()))?;
    let body = doc.get("factorization").unwrap_or(&doc);
    let mut matrix = |key: &str| -> Result<SeriesMatrix, JobError> {
        let rows = body.get(key).and_then(Value::as_array).ok_or_else(|| JobError::new("bad_json", format!("missing matrix '{key}'")))?;
        rows.iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| JobError::new("bad_json", format!("rows of '{key}' must be arrays")))?
                    .iter()
                    .map(|e| e.as_str().ok_or_else(|| JobError::new("bad_json", "entries must be strings")).and_then(|t| ctx.parse(t)))
                    .collect()
            })
            .collect()
    };
    let phi = matrix("phi")?;
    let psi = matrix("psi")?;
    let equation = ctx.parse(str_field(body, "equation")?)?;
    Ok(MatrixFactorization::new(equation, phi, psi))
}

fn mf_transform(ctx: &mut Ctx, job: &JobSpec) -> Result<(Value, i32), JobError> {
    let mf = read_mf(ctx, &job.input)?;
    let mut m = ctx.header(job.command);
    let err = |e: crate::mfact::MfError| JobError::new("mf_error", e.to_string());
    let code = match job.command {
        Command::MfVerify => {
            let ok = verify_mf(&mf).map_err(err)?;
            m.insert("factorization".into(), mf_value(ctx, &mf)?);
            if ok {
                0
            } else {
                1
            }
        }
        Command::MfSharp => {
            let b = ctx.var_index(job.variable.as_deref().ok_or_else(|| JobError::new("usage", "mf-sharp needs a variable"))?)?;
            let out = knorrer_sharp(&mf, b).map_err(err)?;
            m.insert("factorization".into(), mf_value(ctx, &out)?);
            0
        }
        _ => {
            let b = ctx.var_index(job.variable.as_deref().ok_or_else(|| JobError::new("usage", "mf-flat needs a variable"))?)?;
            let (first, second) = knorrer_flat(&mf, b).map_err(err)?;
            m.insert("blocks".into(), Value::Array(vec![mf_value(ctx, &first)?, mf_value(ctx, &second)?]));
            0
        }
    };
    Ok((Value::Object(m), code))
}

/// Human-readable rendering of a report: one `key: value` line per field.
fn text_report(v: &Value) -> String {
    fn line(out: &mut String, indent: usize, key: &str, v: &Value) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (k, x) in m {
                    line(out, indent + 1, k, x);
                }
            }
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let items: Vec<String> = a.iter().map(scalar).collect();
                out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
            }
            Value::Array(a) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (i, x) in a.iter().enumerate() {
                    line(out, indent + 1, &format!("[{i}]"), x);
                }
            }
            x => out.push_str(&format!("{pad}{key}: {}\n", scalar(x))),
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            x => x.to_string(),
        }
    }
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            line(&mut out, 0, k, x);
        }
    }
    out
}
