//! Drive the command-line job runner from code: one JSON report, then a
//! batch of JSON lines.
//!
//!     cargo run --example cli_jobs

use adeclass::cli::{parse_field, run, run_batch, Command, JobSpec};

fn main() {
    let mut job = JobSpec::new(Command::Classify, parse_field("fp:5").unwrap(), "x^3 + y^5 + x*y^4");
    job.seed = Some(1);
    let out = run(&job);
    println!("{}\n(exit code {})\n", out.output, out.exit_code);

    let batch = run_batch(&JobSpec::new(Command::Classify, parse_field("q").unwrap(), ""), "x^2 + y^4\nx*y\nx^3 + y^3 + z^3\n");
    print!("{}", batch.output);
    println!("(exit code {})", batch.exit_code);
}
