//! `spinbench`: generate spin-glass ensembles, run the BF-Null solver,
//! compute exact ground states, quadratize cubic models, analyze solution
//! quality, and emit timing tables and SVG reports.

mod commands;
mod manifest;
mod svg;

use clap::{Parser, Subcommand};

/// Error classes mapped to process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,      // exit 2
    Validation, // exit 3
    Resource,   // exit 4
}

#[derive(Debug)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Usage,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Validation,
            message: message.into(),
        }
    }
}

impl From<spinbench_core::Error> for CliError {
    fn from(err: spinbench_core::Error) -> Self {
        use spinbench_core::Error as E;
        let class = match err {
            E::SizeGuard { .. } | E::WidthGuard { .. } => ErrorClass::Resource,
            _ => ErrorClass::Validation,
        };
        CliError {
            class,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::validation(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "spinbench",
    version,
    about = "Spin-glass benchmarking: instance ensembles, BF-Null baseline runs, exact ground states, quadratization, quality metrics and timing models"
)]
struct Cli {
    /// Emit errors as a JSON envelope on stderr.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel reads (default: SPINBENCH_WORKERS, then
    /// all cores). Never changes outputs, only speed.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded ensemble of instance files.
    Generate(commands::generate::GenerateArgs),
    /// Run the bias-field null-hypothesis solver on an instance.
    Bfnull(commands::bfnull::BfnullArgs),
    /// Compute the exact ground state of an instance.
    Exact(commands::exact::ExactArgs),
    /// Reduce cubic terms to quadratic ones with penalty gadgets.
    Reduce(commands::reduce::ReduceArgs),
    /// Summarize sample files against a ground state as a CSV report.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Emit a runtime comparison table (measured and modeled).
    Timing(commands::timing::TimingArgs),
    /// Render analysis CSVs as deterministic SVG figures.
    Report(commands::report::ReportArgs),
}

fn worker_count(cli_value: Option<usize>) -> Option<usize> {
    cli_value.or_else(|| {
        std::env::var("SPINBENCH_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let json = cli.json;

    let run = || -> CliResult<()> {
        match &cli.command {
            Command::Generate(args) => commands::generate::run(args),
            Command::Bfnull(args) => commands::bfnull::run(args),
            Command::Exact(args) => commands::exact::run(args),
            Command::Reduce(args) => commands::reduce::run(args),
            Command::Analyze(args) => commands::analyze::run(args),
            Command::Timing(args) => commands::timing::run(args),
            Command::Report(args) => commands::report::run(args),
        }
    };

    let outcome = match worker_count(cli.workers) {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(e) => Err(CliError::validation(format!("worker pool: {e}"))),
            }
        }
        None => run(),
    };

    match outcome {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            let code = match err.class {
                ErrorClass::Usage => 2,
                ErrorClass::Validation => 3,
                ErrorClass::Resource => 4,
            };
            if json {
                let envelope = serde_json::json!({
                    "error": {
                        "code": code,
                        "kind": match err.class {
                            ErrorClass::Usage => "usage",
                            ErrorClass::Validation => "validation",
                            ErrorClass::Resource => "resource",
                        },
                        "message": err.message,
                    }
                });
                eprintln!("{envelope}");
            } else {
                eprintln!("error: {}", err.message);
            }
            std::process::ExitCode::from(code)
        }
    }
}
