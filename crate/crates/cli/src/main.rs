use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nijenhuis_cli::input::parse_variant;
use nijenhuis_cli::{exit, run_suite, CliError, SuiteConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Exact verification suites for pre-Lie², Nijenhuis and homotopy structures.
#[derive(Debug, Parser)]
#[command(name = "nijenhuis", version)]
struct Args {
    /// Suite to run; `--suite list` prints the registry.
    #[arg(long)]
    suite: String,
    /// JSON structure file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Truncation order for formal power series.
    #[arg(long = "trunc-K", default_value_t = 3)]
    trunc_k: usize,
    /// Weight bound in the free Lie algebra.
    #[arg(long, default_value_t = 3)]
    weight: usize,
    /// Arity or word-length bound.
    #[arg(long, default_value_t = 4)]
    arity: usize,
    #[arg(long, default_value = "pinf")]
    variant: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of seeded samples (0 keeps the suite default).
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Refuse runs whose estimated term count exceeds this.
    #[arg(long, default_value_t = 50_000_000)]
    ceiling: u128,
    /// Write the structured report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format printed on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn run(args: Args) -> Result<i32, CliError> {
    if args.suite == "list" {
        for s in nijenhuis_cli::SUITES {
            println!("{s}");
        }
        return Ok(exit::PASS);
    }
    let config = SuiteConfig {
        suite: args.suite,
        input: args.input,
        trunc_k: args.trunc_k,
        weight: args.weight,
        arity: args.arity,
        variant: parse_variant(&args.variant)?,
        seed: args.seed,
        samples: args.samples,
        ceiling: args.ceiling,
    };
    let report = run_suite(&config)?;
    match args.format {
        Format::Text => print!("{}", report.text()),
        Format::Structured => print!("{}", report.structured()),
    }
    if let Some(path) = args.out {
        std::fs::write(path, report.structured())?;
    }
    Ok(if report.passed { exit::PASS } else { exit::CHECK_FAILED })
}

fn main() -> ExitCode {
    let code = match run(Args::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
