use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use syzygy_cli::commands::combine;
use syzygy_cli::{parse_spec, run_batch, Command, Flags, Format, Status};

/// Minimal free resolutions and syzygy asymptotics over graded complete intersections.
#[derive(Parser, Debug)]
#[command(name = "syzygy", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Example files (TOML).
    #[arg(required = true)]
    specs: Vec<PathBuf>,
    /// Number of syzygy steps N.
    #[arg(long)]
    steps: Option<usize>,
    /// Degree bound for exactness checks of kernels.
    #[arg(long)]
    degree_bound: Option<i32>,
    /// Period of the quasi-polynomial fits.
    #[arg(long)]
    period: Option<usize>,
    /// Seed for every randomized choice.
    #[arg(long)]
    seed: Option<u64>,
    /// Operator combinations tried per step.
    #[arg(long)]
    trials: Option<usize>,
    /// Directory for cached resolutions.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Highest degree compared by `oracle` (defaults to the degree bound).
    #[arg(long)]
    max_degree: Option<i32>,
    /// Wall-clock budget in seconds for computing resolutions.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Where `report` writes its files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut specs = Vec::with_capacity(cli.specs.len());
    for path in &cli.specs {
        match parse_spec(path) {
            Ok(s) => specs.push(s),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(Status::Usage.code() as u8);
            }
        }
    }
    let time_limit = match cli.time_limit {
        Some(t) if !(t.is_finite() && t >= 0.0) => {
            eprintln!("error: --time-limit must be a non-negative number of seconds");
            return ExitCode::from(Status::Usage.code() as u8);
        }
        t => t.map(Duration::from_secs_f64),
    };
    let flags = Flags {
        steps: cli.steps,
        degree_bound: cli.degree_bound,
        period: cli.period,
        seed: cli.seed,
        trials: cli.trials,
        cache_dir: cli.cache_dir,
        output: cli.output,
        max_degree: cli.max_degree,
        time_limit,
        out_dir: cli.out_dir,
    };
    let outcomes = run_batch(cli.command, &specs, &flags);
    for o in &outcomes {
        for n in &o.notes {
            eprintln!("{n}");
        }
    }
    let _ = std::io::stdout().write_all(combine(&outcomes, &flags, cli.command).as_bytes());
    let status = outcomes.iter().map(|o| o.status).max().unwrap_or(Status::Ok);
    ExitCode::from(status.code() as u8)
}
