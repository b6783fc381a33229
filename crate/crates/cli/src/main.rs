use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use coe_cli::{emit_report, run, Command, Format, ParamsDoc, RunOptions};
use coe_core::Exec;

/// Verify orbit equivalence data and transfer (co)homology between actions.
#[derive(Parser, Debug)]
#[command(name = "coe", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// Instance file or directory of instance files. Repeatable.
    #[arg(long, required = true)]
    instance: Vec<PathBuf>,

    /// Only this link (and its two actions).
    #[arg(long)]
    link: Option<String>,

    /// Top degree of the bar complexes. Dimensions are reported below it
    #[arg(long)]
    max_degree: Option<usize>,

    /// Seed for sampled vectors and functionals
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Include wall-clock timings. Makes output nondeterministic.
    #[arg(long)]
    timings: bool,

    /// Run every computation on one thread.
    #[arg(long)]
    sequential: bool,
}

fn env_usize(key: &str) -> Result<Option<usize>, String> {
    match std::env::var(key) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{key}={v} is not a non-negative integer")),
        Err(_) => Ok(None),
    }
}

fn overrides(args: &Args) -> Result<ParamsDoc, String> {
    let env = ParamsDoc {
        max_degree: env_usize("COE_MAX_DEGREE")?,
        degree_cap: env_usize("COE_DEGREE_CAP")?,
        size_cap: env_usize("COE_SIZE_CAP")?,
        dual_norm_dim_cap: env_usize("COE_DUAL_NORM_DIM")?,
        ..ParamsDoc::default()
    };
    let flags = ParamsDoc {
        max_degree: args.max_degree,
        seed: args.seed,
        ..ParamsDoc::default()
    };
    Ok(env.overlay(&flags))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = match overrides(&args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        link: args.link.clone(),
        timings: args.timings,
        exec: args.sequential.then_some(Exec::Sequential),
    };
    let report = match run(args.command, &args.instance, &overrides, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = emit_report(&report, args.format);
    match &args.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.status == coe_cli::report::Status::Pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
