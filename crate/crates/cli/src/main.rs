use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sl2v_core::runner::{self, Format, RunConfig, Tolerances, DEFAULT_BUDGET, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

/// Exact and numerical checks for SL₂(q) representation counts and the
/// associated orbit-graph complexes.
#[derive(Debug, Parser)]
#[command(name = "sl2v", version)]
struct Args {
    /// prime q with q ≡ 5 or 13 (mod 24), q > 5
    #[arg(long)]
    q: u32,
    /// comma-separated check names, or `all`
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// candidate paths screened by the acyclicity search
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// residual bound for numerical assertions
    #[arg(long, default_value_t = Tolerances::default().assertion)]
    tol: f64,
    /// unitarity residual bound
    #[arg(long, default_value_t = Tolerances::default().unitarity)]
    tol_unitary: f64,
    /// add per-check wall-clock times to the report
    #[arg(long)]
    timings: bool,
    /// print the available check names and exit
    #[arg(long, exclusive = true)]
    list_checks: bool,
}

const USAGE_ERROR: u8 = 2;

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list-checks") {
        for c in runner::CHECK_NAMES {
            println!("{c}");
        }
        return ExitCode::SUCCESS;
    }
    let args = Args::parse();
    let mut cfg = match RunConfig::new(args.q, &args.checks) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sl2v: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    if args.jobs == 0 || !(args.tol > 0.0) || !(args.tol_unitary > 0.0) {
        eprintln!("sl2v: --jobs and tolerances must be positive");
        return ExitCode::from(USAGE_ERROR);
    }
    cfg.seed = args.seed;
    cfg.budget = args.budget;
    cfg.jobs = args.jobs;
    cfg.timings = args.timings;
    cfg.tolerances = Tolerances { assertion: args.tol, unitarity: args.tol_unitary };
    cfg.format = match args.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    cfg.out = args.out;

    let report = match runner::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sl2v: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("sl2v: cannot write {}: {e}", p.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
