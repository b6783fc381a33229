//! Text, JSON and CSV renderings of a report. All three are deterministic
//! functions of the report value.

use std::fmt::Write;

use crate::report::{Report, Status};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Text => emit_text(report),
        Format::Json => emit_json(report),
        Format::Csv => emit_csv(report),
    }
}

pub fn emit_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

pub const CSV_HEADER: [&str; 6] = [
    "action",
    "group",
    "coefficients",
    "orientation",
    "degree",
    "dim",
];

/// The dimensions table only. Action names are qualified by instance.
pub fn emit_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for inst in &report.instances {
        for d in &inst.dims {
            w.write_record([
                format!("{}/{}", inst.name, d.action),
                d.group.clone(),
                d.coefficients.clone(),
                d.orientation.clone(),
                d.degree.to_string(),
                d.dim.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

pub fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}  command: {}  status: {}",
        report.tool,
        report.version,
        report.command,
        report.status.as_str()
    );
    for inst in &report.instances {
        let _ = writeln!(out);
        let _ = writeln!(out, "== {}  sha256 {}", inst.name, inst.sha256);
        let _ = writeln!(out, "   seed {}  max degree {}", inst.seed, inst.max_degree);
        for s in &inst.subjects {
            let tail = if s.met {
                String::new()
            } else {
                format!("  <-- expected {}", outcome_str(s.expect))
            };
            let _ = writeln!(out, "-- {}: {}{}", s.name, outcome_str(s.observed), tail);
            for v in &s.verdicts {
                let mark = match v.verdict {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                };
                let _ = writeln!(out, "   {mark}  {} ({} cases)", v.check, v.cases);
                if let Some(w) = &v.witness {
                    let _ = writeln!(out, "         witness: {w}");
                }
            }
        }
        if !inst.dims.is_empty() {
            let _ = writeln!(out, "-- dimensions");
            for d in &inst.dims {
                let sym = if d.orientation == "homology" {
                    "H_"
                } else {
                    "H^"
                };
                let _ = writeln!(
                    out,
                    "   {:<12} {:<8} {sym}{}({}) = {}",
                    d.action, d.group, d.degree, d.coefficients, d.dim
                );
            }
        }
        for n in &inst.notes {
            let _ = writeln!(out, "   note: {n}");
        }
        if let Some(ts) = &inst.timings {
            for t in ts {
                let _ = writeln!(out, "   time: {} {:.1} ms", t.stage, t.ms);
            }
        }
    }
    out
}

fn outcome_str(o: crate::instance::Outcome) -> &'static str {
    match o {
        crate::instance::Outcome::Pass => "pass",
        crate::instance::Outcome::Fail => "fail",
        crate::instance::Outcome::Reject => "reject",
    }
}
