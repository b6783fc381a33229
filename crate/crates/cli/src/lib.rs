//! Command-line front end: instance files in, verification reports out.

pub mod commands;
pub mod emit;
pub mod instance;
pub mod report;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{run_command, Command, CommandError, RunOptions};
pub use emit::{emit_report, Format};
pub use instance::{parse_instance, parse_instance_with, Instance, InstanceError, ParamsDoc};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Instance { path: String, source: InstanceError },
    #[error("{path}: {source}")]
    Command { path: String, source: CommandError },
    #[error("no instance defines link `{0}`")]
    LinkNotFound(String),
    #[error("no instance files found")]
    NoInstances,
}

/// Expands directories into their `*.json` files, sorted by name.
pub fn instance_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let entries = std::fs::read_dir(p).map_err(|source| io_err(p, source))?;
            let mut files = Vec::new();
            for e in entries {
                let path = e.map_err(|source| io_err(p, source))?.path();
                if path.extension().is_some_and(|x| x == "json") {
                    files.push(path);
                }
            }
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::NoInstances);
    }
    Ok(out)
}

fn io_err(p: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: p.display().to_string(),
        source,
    }
}

/// Loads every instance, runs `command` on each, and aggregates. With a
/// link selector, instances that do not define the link are skipped.
pub fn run(
    command: Command,
    inputs: &[PathBuf],
    overrides: &ParamsDoc,
    opts: &RunOptions,
) -> Result<Report, CliError> {
    let mut reports = Vec::new();
    for path in instance_paths(inputs)? {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|source| io_err(&path, source))?;
        let inst = parse_instance_with(&text, overrides).map_err(|source| CliError::Instance {
            path: shown.clone(),
            source,
        })?;
        if let Some(l) = &opts.link {
            if inst.link_doc(l).is_none() {
                continue;
            }
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| shown.clone());
        let r = run_command(command, &inst, &name, opts).map_err(|source| CliError::Command {
            path: shown.clone(),
            source,
        })?;
        reports.push(r);
    }
    if let (Some(l), true) = (&opts.link, reports.is_empty()) {
        return Err(CliError::LinkNotFound(l.clone()));
    }
    Ok(Report::new(command.to_string(), reports))
}
