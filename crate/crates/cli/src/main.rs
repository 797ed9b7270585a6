use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_core::{builtin, Tolerance, DEFAULT_POINTS, DEFAULT_SEED};
use jacobi_verify::{emit_report, load_builtin, load_document, run_suite, Config, Format, SUITES};

#[derive(Parser)]
#[command(name = "verify", version, about = "Measure defects of Jacobi-type structures on a coordinate chart")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and write a defect report.
    Check(CheckArgs),
    /// List built-in examples and suites.
    List,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name, or `all`.
    suite: String,
    #[command(flatten)]
    source: Source,
    /// Number of sample points.
    #[arg(long, default_value_t = DEFAULT_POINTS, value_parser = clap::value_parser!(usize))]
    points: usize,
    /// Sampling seed; defaults to $VERIFY_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    tol_abs: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON structure document.
    #[arg(long)]
    chart: Option<PathBuf>,
    /// Built-in example name (see `verify list`).
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

const USAGE_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Check(args) => match check(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(USAGE_ERROR)
            }
        },
    }
}

fn list() {
    println!("builtins:");
    for name in builtin::names() {
        println!("  {name:<20} {}", builtin::summary(name).unwrap_or(""));
    }
    println!("suites:");
    for s in SUITES {
        println!("  {s}");
    }
}

fn default_seed() -> anyhow::Result<u64> {
    match std::env::var("VERIFY_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("VERIFY_SEED must be an unsigned integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn check(args: CheckArgs) -> anyhow::Result<bool> {
    if args.points == 0 {
        anyhow::bail!("--points must be positive");
    }
    for (flag, v) in [("--tol-abs", args.tol_abs), ("--tol-rel", args.tol_rel)] {
        if !(v.is_finite() && v >= 0.0) {
            anyhow::bail!("{flag} must be a finite nonnegative number");
        }
    }
    let seed = match args.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let set = match (&args.source.chart, &args.source.builtin) {
        (Some(path), _) => load_document(path)?,
        (None, Some(name)) => load_builtin(name)?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    let cfg = Config {
        points: args.points,
        seed,
        tol: Tolerance {
            abs: args.tol_abs,
            rel: args.tol_rel,
        },
    };
    let report = run_suite(&args.suite, &set, &cfg)?;
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    emit_report(&report, format, args.report.as_deref())
        .map_err(|e| anyhow::anyhow!("cannot write report: {e}"))?;
    Ok(report.overall)
}
