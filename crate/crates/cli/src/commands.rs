use std::fmt;
use std::time::Instant;

use coe_core::bar::{
    build_chain_complex, build_cochain_complex, first_nonzero_composite, BarError, Orientation,
};
use coe_core::coe::{verify_coe, verify_partition_laws, CoeError, LinkError, Side, VerifiedLink};
use coe_core::group::verify_group_axioms;
use coe_core::modules::{
    build_full_module, build_n0, build_w0, dualize, verify_representation, GModule,
};
use coe_core::report::Check;
use coe_core::transfer::{
    verify_local_equivariance, verify_transfer, BasisOrder, TransferError, TransferOptions,
};
use coe_core::{Config, Exec};
use thiserror::Error;

use crate::instance::{Instance, NamedAction, Outcome};
use crate::report::{DimEntry, InstanceReport, Subject, Timing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Verify,
    Homology,
    Cohomology,
    Transfer,
    Report,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Verify => "verify",
            Command::Homology => "homology",
            Command::Cohomology => "cohomology",
            Command::Transfer => "transfer",
            Command::Report => "report",
        })
    }
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("no link named `{0}`")]
    UnknownLink(String),
    #[error("action `{action}`: {source}")]
    Bar { action: String, source: BarError },
    #[error("link `{link}`: {source}")]
    Transfer { link: String, source: TransferError },
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Restrict to one link (and, for homology, its two actions).
    pub link: Option<String>,
    pub timings: bool,
    pub exec: Option<Exec>,
}

struct Ctx<'a> {
    inst: &'a Instance,
    opts: &'a RunOptions,
    config: Config,
    timings: Vec<Timing>,
}

impl<'a> Ctx<'a> {
    fn record(&mut self, stage: String, start: Instant) {
        if self.opts.timings {
            self.timings.push(Timing {
                stage,
                ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
    }

    fn max_degree(&self) -> usize {
        self.inst.params.max_degree
    }

    fn links(&self) -> Vec<String> {
        match &self.opts.link {
            Some(l) => vec![l.clone()],
            None => self.inst.link_names().cloned().collect(),
        }
    }

    fn actions(&self) -> Vec<&'a NamedAction> {
        let inst = self.inst;
        match self.opts.link.as_ref().and_then(|l| inst.link_doc(l)) {
            Some(doc) => {
                let mut names = vec![&doc.source, &doc.target];
                names.sort();
                names.dedup();
                names.into_iter().map(|n| &inst.actions[n]).collect()
            }
            None => inst.actions.values().collect(),
        }
    }

    fn transfer_options(&self, basis_order: BasisOrder) -> TransferOptions {
        let p = &self.inst.params;
        TransferOptions {
            max_degree: p.max_degree,
            basis_order,
            seed: p.seed,
            random_vectors: p.random_vectors,
            lp_samples: p.lp_samples,
            config: self.config.clone(),
        }
    }
}

/// Runs `command` on one instance.
pub fn run_command(
    command: Command,
    inst: &Instance,
    name: &str,
    opts: &RunOptions,
) -> Result<InstanceReport, CommandError> {
    if let Some(l) = &opts.link {
        if inst.link_doc(l).is_none() {
            return Err(CommandError::UnknownLink(l.clone()));
        }
    }
    let mut config = inst.params.config.clone();
    if let Some(e) = opts.exec {
        config.exec = e;
    }
    let mut ctx = Ctx {
        inst,
        opts,
        config,
        timings: Vec::new(),
    };
    let mut out = InstanceReport {
        name: name.to_string(),
        sha256: inst.sha256.clone(),
        seed: inst.params.seed,
        max_degree: inst.params.max_degree,
        subjects: Vec::new(),
        dims: Vec::new(),
        notes: Vec::new(),
        timings: None,
    };
    let everything = command == Command::Report;
    if (command == Command::Verify || everything) && opts.link.is_none() {
        verify_groups(&mut ctx, &mut out);
        verify_actions(&mut ctx, &mut out);
    }
    if command == Command::Homology || everything {
        homology(&mut ctx, &mut out, Orientation::Chain)?;
    }
    if command == Command::Cohomology || everything {
        homology(&mut ctx, &mut out, Orientation::Cochain)?;
    }
    if command == Command::Verify {
        for l in ctx.links() {
            let start = Instant::now();
            let (s, _) = verify_link(&ctx, &l, Stages::VERIFY);
            ctx.record(format!("verify {l}"), start);
            out.subjects.push(s);
        }
    }
    if command == Command::Transfer || everything {
        for l in ctx.links() {
            let start = Instant::now();
            let s = transfer_link(&ctx, &l, everything, &mut out)?;
            ctx.record(format!("transfer {l}"), start);
            out.subjects.push(s);
        }
    }
    if opts.timings {
        out.timings = Some(ctx.timings);
    }
    Ok(out)
}

fn verify_groups(ctx: &mut Ctx, out: &mut InstanceReport) {
    for (name, g) in &ctx.inst.groups {
        let mut s = Subject::new(format!("group {name}"), Outcome::Pass);
        s.extend(verify_group_axioms(g));
        out.subjects.push(s);
    }
}

fn verify_actions(ctx: &mut Ctx, out: &mut InstanceReport) {
    for a in ctx.actions() {
        let mut s = Subject::new(format!("action {}", a.name), Outcome::Pass);
        let full = build_full_module(&a.action);
        let (n0, _) = build_n0(&a.action);
        let w0 = build_w0(&a.action);
        for m in [&full, &n0, &w0] {
            s.push(verify_representation(m));
            s.push(verify_representation(&dualize(m)));
        }
        let free = coe_core::action::check_topologically_free(&a.action);
        let orbits = coe_core::action::orbits(&a.action).len();
        out.notes.push(format!(
            "action {}: {} points, {} orbit{}, {}",
            a.name,
            a.action.size(),
            orbits,
            if orbits == 1 { "" } else { "s" },
            if free.free { "free" } else { "not free" }
        ));
        out.subjects.push(s);
    }
}

fn coefficient_modules(a: &NamedAction, orientation: Orientation) -> Vec<GModule> {
    let (n0, _) = build_n0(&a.action);
    let w0 = build_w0(&a.action);
    match orientation {
        Orientation::Chain => vec![dualize(&n0), dualize(&w0)],
        // double duals, which are the modules themselves
        Orientation::Cochain => vec![dualize(&dualize(&n0)), dualize(&dualize(&w0))],
    }
}

fn homology(
    ctx: &mut Ctx,
    out: &mut InstanceReport,
    orientation: Orientation,
) -> Result<(), CommandError> {
    let degree = ctx.max_degree().max(1);
    let (label, word) = match orientation {
        Orientation::Chain => ("homology", "H_"),
        Orientation::Cochain => ("cohomology", "H^"),
    };
    for a in ctx.actions() {
        let config = ctx.config.clone();
        let mut s = Subject::new(format!("action {}: {label}", a.name), Outcome::Pass);
        let mut h0 = Vec::new();
        let start = Instant::now();
        for v in coefficient_modules(a, orientation) {
            let built = match orientation {
                Orientation::Chain => build_chain_complex(&v, degree, &config),
                Orientation::Cochain => build_cochain_complex(&v, degree, &config),
            };
            let complex = built.map_err(|source| CommandError::Bar {
                action: a.name.clone(),
                source,
            })?;
            let kind = match orientation {
                Orientation::Chain => v.kind().to_string(),
                Orientation::Cochain => format!("{}**", v.kind()),
            };
            s.push(Check::from_witness(
                format!("boundary squares to zero ({kind})"),
                complex.boundaries().len() as u64,
                first_nonzero_composite(&complex)
                    .map(|k| format!("composite at degree {k} is nonzero")),
            ));
            let dims = complex.homology_dims();
            h0.push(dims[0]);
            for (n, dim) in dims.into_iter().enumerate() {
                out.dims.push(DimEntry {
                    action: a.name.clone(),
                    group: a.group_name.clone(),
                    coefficients: kind.clone(),
                    orientation: label.to_string(),
                    degree: n,
                    dim,
                });
            }
        }
        ctx.record(format!("{label} {}", a.name), start);
        let (n0, w0) = (h0[0], h0[1]);
        let name = match orientation {
            Orientation::Chain => "dim H_0(W0*) = 1 + dim H_0(N0*)",
            Orientation::Cochain => "dim H^0(W0) = 1 + dim H^0(N0)",
        };
        s.push(Check::from_witness(
            name,
            1,
            (w0 != n0 + 1).then(|| format!("{word}0 dimensions {w0} and {n0}")),
        ));
        out.subjects.push(s);
    }
    Ok(())
}

/// Which link checks to run besides construction and the COE identities.
#[derive(Clone, Copy)]
struct Stages {
    partition_laws: bool,
    local_equivariance: bool,
    /// A transfer report follows, so the expectation covers it.
    transfer: bool,
}

impl Stages {
    const VERIFY: Stages = Stages {
        partition_laws: true,
        local_equivariance: true,
        transfer: false,
    };
}

fn verify_link(ctx: &Ctx, name: &str, stages: Stages) -> (Subject, Option<VerifiedLink>) {
    let doc = ctx.inst.link_doc(name).expect("selected links exist");
    // a flipped basis order only affects transfer matrices
    let expect = if doc.basis_order == BasisOrder::Standard || stages.transfer {
        doc.expect
    } else {
        Outcome::Pass
    };
    let mut s = Subject::new(format!("link {name}"), expect);
    let link = match ctx.inst.build_link(name).expect("selected links exist") {
        Ok(link) => link,
        Err(e @ CoeError::HypothesisViolation { .. }) => {
            s.reject(Check::fail("construct COE data", 1, e.to_string()));
            return (s, None);
        }
        Err(e) => {
            s.push(Check::fail("construct COE data", 1, e.to_string()));
            return (s, None);
        }
    };
    s.extend(verify_coe(&link));
    if stages.partition_laws {
        s.extend(verify_partition_laws(&link, ctx.max_degree().max(2)));
    }
    let verified = match VerifiedLink::new(link) {
        Ok(v) => v,
        Err(e @ LinkError::NotFree { .. }) => {
            s.reject(Check::fail("actions are free", 1, e.to_string()));
            return (s, None);
        }
        Err(LinkError::Failed(_)) => return (s, None),
    };
    if stages.local_equivariance {
        s.extend(verify_local_equivariance(&verified));
    }
    (s, Some(verified))
}

/// With `full`, partition laws are included and the dimension rows are
/// left to the homology commands.
fn transfer_link(
    ctx: &Ctx,
    name: &str,
    full: bool,
    out: &mut InstanceReport,
) -> Result<Subject, CommandError> {
    let stages = Stages {
        partition_laws: full,
        // the transfer report checks local equivariance itself
        local_equivariance: false,
        transfer: true,
    };
    let (mut s, verified) = verify_link(ctx, name, stages);
    let Some(link) = verified else {
        if s.observed != Outcome::Reject {
            out.notes.push(format!(
                "link {name}: transfer skipped, link does not verify"
            ));
        }
        return Ok(s);
    };
    let doc = ctx.inst.link_doc(name).expect("selected links exist");
    let opts = ctx.transfer_options(doc.basis_order);
    let report = verify_transfer(&link, &opts).map_err(|source| CommandError::Transfer {
        link: name.to_string(),
        source,
    })?;
    if !full {
        let action_of = |side: Side| match side {
            Side::G => &doc.source,
            Side::H => &doc.target,
        };
        for row in &report.dims {
            let a = &ctx.inst.actions[action_of(row.side)];
            out.dims.push(DimEntry {
                action: a.name.clone(),
                group: a.group_name.clone(),
                coefficients: row.coefficients.clone(),
                orientation: match row.orientation {
                    Orientation::Chain => "homology",
                    Orientation::Cochain => "cohomology",
                }
                .to_string(),
                degree: row.degree,
                dim: row.dim,
            });
        }
    }
    let sweep = &report.norm_sweep;
    out.notes.push(format!(
        "link {name}: dual-norm sweep made {} comparisons over {} samples per side, {} with equality{}",
        sweep.comparisons,
        sweep.samples,
        sweep.tight,
        if sweep.skipped_over_cap { " (a side was skipped: dimension over cap)" } else { "" }
    ));
    for note in &report.notes {
        out.notes.push(format!("link {name}: {note}"));
    }
    s.extend(report.verification);
    Ok(s)
}
