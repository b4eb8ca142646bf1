use clap::Parser;
use moment_kernel::mutation::Mutation;
use moment_kernel::verify::{
    parse_field, render_report, run_suites, Format, SuiteConfig, SuiteKind,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Seeded verification suites for the moment-transform / Saint Venant engine.
#[derive(Parser, Debug)]
#[command(name = "moment-verify", version)]
struct Args {
    /// Which suite to run: kernel, identities or all.
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: SuiteKind,
    /// Dimension of the base space (default 2, or the loaded field's).
    #[arg(long)]
    n: Option<usize>,
    /// Tensor rank (default 2, or the loaded field's).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total degree of random polynomial parts.
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// Sample points per check.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Tolerance for floating point checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Report format: json, csv or text.
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Load the field under test from a file instead of drawing one.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Corrupt one term of W^k or of the recovery formula, e.g. wk-sign:1.
    #[arg(long, value_parser = parse_mutation)]
    mutate: Option<Mutation>,
}

fn parse_suite(s: &str) -> Result<SuiteKind, String> {
    s.parse().map_err(|e: moment_kernel::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: moment_kernel::Error| e.to_string())
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse().map_err(|e: moment_kernel::Error| e.to_string())
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("moment-verify: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let field = match &args.field {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("cannot read {}: {e}", path.display())),
            };
            match parse_field(&text) {
                Ok(f) => Some(f),
                Err(e) => return usage_error(format!("{}: {e}", path.display())),
            }
        }
        None => None,
    };

    let cfg = SuiteConfig {
        n: args.n.or(field.as_ref().map(|f| f.n())).unwrap_or(2),
        m: args.m.or(field.as_ref().map(|f| f.rank())).unwrap_or(2),
        k: args.k,
        seed: args.seed,
        degree: args.degree,
        samples: args.samples,
        tol_float: args.tol,
        format: args.format,
        mutation: args.mutate,
        field,
    };
    if let Err(e) = cfg.validate() {
        return usage_error(e);
    }

    let results = match run_suites(args.suite, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("moment-verify: suite aborted: {e}");
            return ExitCode::from(1);
        }
    };
    let report = match render_report(&results, cfg.format) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("moment-verify: {e}");
            return ExitCode::from(1);
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!("moment-verify: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{report}"),
    }
    if results.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
