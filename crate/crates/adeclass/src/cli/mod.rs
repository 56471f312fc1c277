//! Polynomial parsing/rendering and the job runner behind the `adeclass`
//! binary.

pub mod job;
pub mod poly;

pub use job::{infer_vars, parse_field, parse_verdict, run, run_batch, Command, Format, JobSpec, Outcome, SCHEMA};
pub use poly::{parse_polynomial, render, ParseError, Parsed};
