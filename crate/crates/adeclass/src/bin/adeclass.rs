use adeclass::cli::{parse_field, run, run_batch, Command, Format, JobSpec};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::process::ExitCode;

/// Classify simple (ADE) hypersurface singularities with certificates.
#[derive(Parser)]
#[command(name = "adeclass", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// q, fp:<p>, optionally suffixed with +closed
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// truncation degree N
    #[arg(long, global = true, default_value_t = 16)]
    precision: u32,
    /// comma-separated variable order (inferred when absent)
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a polynomial ("-" reads stdin)
    Classify {
        input: String,
        /// also classify a seeded random disguise of the input
        #[arg(long)]
        seed: Option<u64>,
        /// one polynomial per line, JSON-lines output
        #[arg(long)]
        batch: bool,
    },
    /// Split off the nondegenerate quadratic part
    Split { input: String },
    /// Check a certificate (JSON file) against a polynomial
    Verify { input: String, #[arg(long)] certificate: String },
    /// Standard matrix factorization of a table row
    MfBuild { verdict: String },
    /// Knörrer doubling in a new variable
    MfSharp { file: String, #[arg(long)] var: String },
    /// Restrict a variable to 0 and split the blocks
    MfFlat { file: String, #[arg(long)] var: String },
    /// Check φψ = ψφ = f·𝟙
    MfVerify { file: String },
}

fn text(arg: &str) -> std::io::Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(arg.to_string())
    }
}

fn file(arg: &str) -> std::io::Result<String> {
    if arg == "-" {
        text(arg)
    } else {
        std::fs::read_to_string(arg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match parse_field(&cli.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("adeclass: {}", e.message);
            return ExitCode::from(1);
        }
    };
    let mut batch = false;
    let built = (|| -> std::io::Result<JobSpec> {
        let (command, input) = match &cli.command {
            Cmd::Classify { input, batch: b, .. } => {
                batch = *b;
                (Command::Classify, if *b { file(input)? } else { text(input)? })
            }
            Cmd::Split { input } => (Command::Split, text(input)?),
            Cmd::Verify { input, .. } => (Command::Verify, text(input)?),
            Cmd::MfBuild { .. } => (Command::MfBuild, String::new()),
            Cmd::MfSharp { file: f, .. } => (Command::MfSharp, file(f)?),
            Cmd::MfFlat { file: f, .. } => (Command::MfFlat, file(f)?),
            Cmd::MfVerify { file: f } => (Command::MfVerify, file(f)?),
        };
        let mut job = JobSpec::new(command, field, input);
        job.precision = cli.precision;
        job.vars = cli.vars.clone();
        job.format = match cli.format {
            Fmt::Json => Format::Json,
            Fmt::Text => Format::Text,
        };
        match &cli.command {
            Cmd::Classify { seed, .. } => job.seed = *seed,
            Cmd::Verify { certificate, .. } => job.certificate = Some(file(certificate)?),
            Cmd::MfBuild { verdict } => job.verdict = Some(verdict.clone()),
            Cmd::MfSharp { var, .. } | Cmd::MfFlat { var, .. } => job.variable = Some(var.clone()),
            _ => {}
        }
        Ok(job)
    })();
    let job = match built {
        Ok(j) => j,
        Err(e) => {
            eprintln!("adeclass: {e}");
            return ExitCode::from(1);
        }
    };
    let out = if batch { run_batch(&job, &job.input) } else { run(&job) };
    print!("{}", out.output);
    if !out.output.ends_with('\n') {
        println!();
    }
    ExitCode::from(out.exit_code as u8)
}
