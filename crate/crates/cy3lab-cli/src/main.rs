use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cy3lab::catalog::{self, CatalogEntry};
use cy3lab::report::{self, CaseSelection, RunConfig, Task};
use cy3lab::verify::{self, VerifyConfig};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "cy3lab", version, about = "Normalizers, Picard ranks, Hodge numbers, fundamental groups and modular checks for rigid orbifold Calabi-Yau threefolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected tasks and emit a report.
    Report(Common),
    /// Run every acceptance criterion and print a pass/fail line per criterion.
    Verify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args)]
struct Common {
    /// Comma-separated case labels, or `all`.
    #[arg(long, default_value = "all")]
    cases: String,
    /// Comma-separated subset of normalizer, picard, hodge, pi1, toric, modular.
    #[arg(long, value_delimiter = ',', default_value = "normalizer,picard,hodge,pi1,toric,modular")]
    tasks: Vec<String>,
    /// Truncation tolerance for the modular computations.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Number of random samples in the modular batch.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Catalog file to use instead of the shipped one.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

fn load(path: &Option<PathBuf>) -> Result<Vec<CatalogEntry>, Failure> {
    match path {
        None => Ok(catalog::shipped()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            catalog::load_catalog(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_config(c: &Common) -> Result<RunConfig, Failure> {
    let usage = |e: report::ReportError| Failure::Usage(e.to_string());
    let cases: CaseSelection = c.cases.parse().map_err(usage)?;
    let tasks = c.tasks.iter().map(|t| t.parse::<Task>()).collect::<Result<_, _>>().map_err(usage)?;
    Ok(RunConfig { cases, tasks, tol: c.tol, samples: c.samples, seed: c.seed, ..RunConfig::default() })
}

fn report(c: &Common) -> Result<bool, Failure> {
    let cfg = run_config(c)?;
    let entries = load(&c.catalog)?;
    let r = report::run_report(&cfg, &entries).map_err(|e| {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Internal(e.into())
        }
    })?;
    let text = match c.format {
        Format::Json => r.to_json(),
        Format::Markdown => r.to_markdown(),
    };
    emit(&c.out, &text)?;
    for m in &r.mismatches {
        eprintln!("mismatch: {m}");
    }
    Ok(r.all_matched)
}

fn verify(c: &Common) -> Result<bool, Failure> {
    if !(c.tol > 0.0) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {}", c.tol)));
    }
    let entries = load(&c.catalog)?;
    let cfg = VerifyConfig { seed: c.seed, tol: c.tol, samples: c.samples, ..VerifyConfig::default() };
    let outcomes = verify::run_all(&cfg, &entries);
    let text = match c.format {
        Format::Markdown => {
            let mut s = String::new();
            for o in &outcomes {
                s += &format!("- {}\n", o.line());
                for d in &o.details {
                    s += &format!("  - {d}\n");
                }
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "criterion": o.id,
                        "title": o.title,
                        "passed": o.passed,
                        "seconds": o.elapsed.as_secs_f64(),
                        "budgetSeconds": o.budget.map(|b| b.as_secs()),
                        "details": o.details,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({ "schema": report::SCHEMA, "criteria": rows })).unwrap() + "\n"
        }
    };
    emit(&c.out, &text)?;
    if c.out.is_some() {
        for o in &outcomes {
            eprintln!("{}", o.line());
        }
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report(c) => report(c),
        Command::Verify(c) => verify(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_MISMATCH),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal failure: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
