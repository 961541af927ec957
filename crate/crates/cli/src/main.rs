//! `shalika`: runs verdicts, support scans, period computations and proof
//! identity checks from a JSON configuration and writes a JSON report.
//!
//! Exit codes: `0` success, `1` input or run error, `2` a result that
//! contradicts a closed-form prediction.

use clap::{Args, Parser, Subcommand};
use shalika_cli::{resolve_jobs, run, Command, RunConfig, RunError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shalika", version, about = "Exact Shalika period verifier for minimax supercuspidals of GL(4, Q_p)")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Central character, stable Λ₀ and the transfer verdict.
    Verdict(Common),
    /// Support of the Whittaker function on Shalika points.
    Scan(Common),
    /// The stable period Λ₀ with its partial sums.
    Lambda0(Common),
    /// Random checks of the proof decompositions.
    VerifyIdentities(Common),
    /// Exterior-square factor at q^{s₀} = ±1.
    Lfactor(Common),
    /// The central character.
    CentralChar(Common),
    /// Verdicts over a parameter grid.
    Grid(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Starting congruence level M.
    #[arg(long)]
    level: Option<u32>,
    /// Relative p-adic precision N.
    #[arg(long)]
    precision: Option<u32>,
    /// Worker threads (default: SHALIKA_JOBS, else all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::Verdict(c) => (Command::Verdict, c),
            Sub::Scan(c) => (Command::Scan, c),
            Sub::Lambda0(c) => (Command::Lambda0, c),
            Sub::VerifyIdentities(c) => (Command::VerifyIdentities, c),
            Sub::Lfactor(c) => (Command::Lfactor, c),
            Sub::CentralChar(c) => (Command::CentralChar, c),
            Sub::Grid(c) => (Command::Grid, c),
        }
    }
}

fn execute(command: Command, args: Common) -> Result<i32, RunError> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut config = RunConfig::parse(&text, Some(command))?;
    if args.level.is_some() {
        config.level = args.level;
    }
    if args.precision.is_some() {
        config.precision = args.precision;
    }
    let jobs = resolve_jobs(args.jobs)?;
    let report = run(&config, jobs)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = cli.command.split();
    match execute(command, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
