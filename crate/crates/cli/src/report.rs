use serde::Serialize;

use coe_core::report::{Check, VerificationReport};

use crate::instance::Outcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub verdict: Status,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<Check> for Verdict {
    fn from(c: Check) -> Self {
        Verdict {
            check: c.name,
            verdict: Status::of(c.passed),
            cases: c.cases,
            witness: c.witness,
        }
    }
}

/// A group, action or link together with its verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subject {
    pub name: String,
    pub expect: Outcome,
    pub observed: Outcome,
    pub met: bool,
    pub verdicts: Vec<Verdict>,
}

impl Subject {
    pub fn new(name: impl Into<String>, expect: Outcome) -> Self {
        Subject {
            name: name.into(),
            expect,
            observed: Outcome::Pass,
            met: expect == Outcome::Pass,
            verdicts: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.verdicts.push(check.into());
        self.settle();
    }

    pub fn extend(&mut self, report: VerificationReport) {
        self.verdicts
            .extend(report.checks.into_iter().map(Verdict::from));
        self.settle();
    }

    pub fn reject(&mut self, check: Check) {
        self.verdicts.push(check.into());
        self.observed = Outcome::Reject;
        self.met = self.expect == self.observed;
    }

    fn settle(&mut self) {
        if self.observed != Outcome::Reject {
            let ok = self.verdicts.iter().all(|v| v.verdict == Status::Pass);
            self.observed = if ok { Outcome::Pass } else { Outcome::Fail };
        }
        self.met = self.expect == self.observed;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimEntry {
    pub action: String,
    pub group: String,
    pub coefficients: String,
    pub orientation: String,
    pub degree: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceReport {
    pub name: String,
    pub sha256: String,
    pub seed: u64,
    pub max_degree: usize,
    pub subjects: Vec<Subject>,
    pub dims: Vec<DimEntry>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl InstanceReport {
    pub fn met(&self) -> bool {
        self.subjects.iter().all(|s| s.met)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: Status,
    pub instances: Vec<InstanceReport>,
}

impl Report {
    pub fn new(command: impl Into<String>, instances: Vec<InstanceReport>) -> Self {
        let status = Status::of(instances.iter().all(InstanceReport::met));
        Report {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            status,
            instances,
        }
    }
}
