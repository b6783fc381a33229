//! Instance documents: named groups, actions and links plus run parameters.
//!
//! Parsing is strict. Unknown keys are rejected at every level so a typo
//! in a cocycle table cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::sync::Arc;

use coe_core::action::{build_action, Action, FiniteSpace};
use coe_core::coe::{derive_coe, CoeError, CoeLink};
use coe_core::group::{build_group, Group, GroupSpec};
use coe_core::transfer::BasisOrder;
use coe_core::Config;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDoc {
    Trivial,
    Cyclic {
        order: usize,
    },
    Dihedral {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    Product {
        factors: Vec<GroupDoc>,
    },
    Explicit {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl GroupDoc {
    fn to_spec(&self) -> Result<GroupSpec, String> {
        Ok(match self {
            GroupDoc::Trivial => GroupSpec::Cyclic(1),
            GroupDoc::Cyclic { order } => GroupSpec::Cyclic(*order),
            GroupDoc::Dihedral { n } => GroupSpec::Dihedral(*n),
            GroupDoc::Symmetric { n } => GroupSpec::Symmetric(*n),
            GroupDoc::Product { factors } => {
                let mut specs = factors.iter().map(GroupDoc::to_spec);
                let first = specs
                    .next()
                    .ok_or("a product needs at least one factor")??;
                specs.try_fold(first, |acc, f| {
                    Ok::<_, String>(GroupSpec::Product(Box::new(acc), Box::new(f?)))
                })?
            }
            GroupDoc::Explicit { table, labels } => GroupSpec::Explicit {
                table: table.clone(),
                labels: labels.clone(),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ActionDoc {
    /// Disjoint copies of the left regular action.
    Regular {
        group: String,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        copies: usize,
    },
    /// Every point fixed.
    Trivial { group: String, points: usize },
    /// One permutation of the points per group element, in element order.
    Table {
        group: String,
        points: usize,
        permutations: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

impl ActionDoc {
    pub fn group(&self) -> &str {
        match self {
            ActionDoc::Regular { group, .. }
            | ActionDoc::Trivial { group, .. }
            | ActionDoc::Table { group, .. } => group,
        }
    }
}

/// How a link fares under the full pipeline, expected or observed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    #[default]
    Pass,
    /// At least one check fails.
    Fail,
    /// Construction is refused because an action is not free.
    Reject,
}

impl Outcome {
    fn is_pass(&self) -> bool {
        *self == Outcome::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub source: String,
    pub target: String,
    pub phi: Vec<usize>,
    /// With `psi`, `c` and `cprime` all present the tables are taken as
    /// given; otherwise they are derived from `phi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cprime: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Outcome::is_pass")]
    pub expect: Outcome,
    #[serde(default, skip_serializing_if = "is_standard")]
    pub basis_order: BasisOrder,
}

fn is_standard(b: &BasisOrder) -> bool {
    *b == BasisOrder::Standard
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_norm_dim_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_vectors: Option<usize>,
}

impl ParamsDoc {
    /// Fields set in `other` win.
    pub fn overlay(&self, other: &ParamsDoc) -> ParamsDoc {
        ParamsDoc {
            max_degree: other.max_degree.or(self.max_degree),
            degree_cap: other.degree_cap.or(self.degree_cap),
            size_cap: other.size_cap.or(self.size_cap),
            dual_norm_dim_cap: other.dual_norm_dim_cap.or(self.dual_norm_dim_cap),
            seed: other.seed.or(self.seed),
            lp_samples: other.lp_samples.or(self.lp_samples),
            random_vectors: other.random_vectors.or(self.random_vectors),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    #[serde(default)]
    pub groups: BTreeMap<String, GroupDoc>,
    #[serde(default)]
    pub actions: BTreeMap<String, ActionDoc>,
    #[serde(default)]
    pub links: BTreeMap<String, LinkDoc>,
    #[serde(default)]
    pub params: ParamsDoc,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{what} `{name}` refers to undefined {kind} `{missing}`")]
    Unresolved {
        what: &'static str,
        name: String,
        kind: &'static str,
        missing: String,
    },
    #[error("{what} `{name}`: {message}")]
    Invalid {
        what: &'static str,
        name: String,
        message: String,
    },
    #[error("resource limit: {0}")]
    Cap(String),
}

/// Resolved run parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub max_degree: usize,
    pub seed: u64,
    pub lp_samples: usize,
    pub random_vectors: usize,
    pub config: Config,
}

impl Params {
    fn resolve(doc: &ParamsDoc) -> Params {
        let d = Config::default();
        Params {
            max_degree: doc.max_degree.unwrap_or(2),
            seed: doc.seed.unwrap_or(0),
            lp_samples: doc.lp_samples.unwrap_or(50),
            random_vectors: doc.random_vectors.unwrap_or(100),
            config: Config {
                degree_cap: doc.degree_cap.unwrap_or(d.degree_cap),
                size_cap: doc.size_cap.unwrap_or(d.size_cap),
                dual_norm_dim_cap: doc.dual_norm_dim_cap.unwrap_or(d.dual_norm_dim_cap),
                exec: d.exec,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedAction {
    pub name: String,
    pub group_name: String,
    pub action: Arc<Action>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub doc: InstanceDoc,
    pub groups: BTreeMap<String, Arc<Group>>,
    pub actions: BTreeMap<String, NamedAction>,
    pub params: Params,
    /// Hex SHA-256 of the source text.
    pub sha256: String,
}

/// Parses and resolves a document with its own parameters.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    parse_instance_with(text, &ParamsDoc::default())
}

/// Like [`parse_instance`], with `overrides` taking precedence over the
/// document's `params`.
pub fn parse_instance_with(text: &str, overrides: &ParamsDoc) -> Result<Instance, InstanceError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
    resolve(doc, overrides, sha256)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn resolve(
    doc: InstanceDoc,
    overrides: &ParamsDoc,
    sha256: String,
) -> Result<Instance, InstanceError> {
    let mut groups = BTreeMap::new();
    for (name, g) in &doc.groups {
        let invalid = |message: String| InstanceError::Invalid {
            what: "group",
            name: name.clone(),
            message,
        };
        let spec = g.to_spec().map_err(invalid)?;
        let group = build_group(&spec).map_err(|e| invalid(e.to_string()))?;
        groups.insert(name.clone(), Arc::new(group));
    }

    let mut actions = BTreeMap::new();
    for (name, a) in &doc.actions {
        let group = groups
            .get(a.group())
            .ok_or_else(|| InstanceError::Unresolved {
                what: "action",
                name: name.clone(),
                kind: "group",
                missing: a.group().to_string(),
            })?;
        let invalid = |message: String| InstanceError::Invalid {
            what: "action",
            name: name.clone(),
            message,
        };
        let action = match a {
            ActionDoc::Regular { copies, .. } => regular_copies(group, *copies).map_err(invalid)?,
            ActionDoc::Trivial { points, .. } => {
                Action::trivial(group.clone(), FiniteSpace::new(*points))
            }
            ActionDoc::Table {
                points,
                permutations,
                labels,
                ..
            } => {
                let space = match labels {
                    Some(l) if l.len() == *points => FiniteSpace::with_labels(l.clone()),
                    Some(l) => {
                        return Err(invalid(format!("{} labels for {points} points", l.len())))
                    }
                    None => FiniteSpace::new(*points),
                };
                build_action(group.clone(), space, permutations.clone())
                    .map_err(|e| invalid(e.to_string()))?
            }
        };
        actions.insert(
            name.clone(),
            NamedAction {
                name: name.clone(),
                group_name: a.group().to_string(),
                action: Arc::new(action),
            },
        );
    }

    for (name, l) in &doc.links {
        for end in [&l.source, &l.target] {
            if !actions.contains_key(end) {
                return Err(InstanceError::Unresolved {
                    what: "link",
                    name: name.clone(),
                    kind: "action",
                    missing: end.clone(),
                });
            }
        }
        let explicit = [l.psi.is_some(), l.c.is_some(), l.cprime.is_some()];
        if explicit.iter().any(|&b| b) && !explicit.iter().all(|&b| b) {
            return Err(InstanceError::Invalid {
                what: "link",
                name: name.clone(),
                message: "explicit tables need all of psi, c and cprime".into(),
            });
        }
    }

    let params = Params::resolve(&doc.params.overlay(overrides));
    check_caps(&params, &actions)?;
    Ok(Instance {
        doc,
        groups,
        actions,
        params,
        sha256,
    })
}

fn regular_copies(group: &Arc<Group>, copies: usize) -> Result<Action, String> {
    if copies == 1 {
        return Ok(Action::regular(group.clone()));
    }
    let n = group.order();
    let perms = group
        .elements()
        .map(|k| {
            (0..copies)
                .flat_map(|i| (0..n).map(move |g| i * n + group.mul(k, g)))
                .collect()
        })
        .collect();
    build_action(group.clone(), FiniteSpace::new(n * copies), perms).map_err(|e| e.to_string())
}

fn check_caps(
    params: &Params,
    actions: &BTreeMap<String, NamedAction>,
) -> Result<(), InstanceError> {
    let cfg = &params.config;
    if params.max_degree > cfg.degree_cap {
        return Err(InstanceError::Cap(format!(
            "max degree {} exceeds the degree cap {}",
            params.max_degree, cfg.degree_cap
        )));
    }
    for a in actions.values() {
        let n = a.action.group().order();
        // the largest complex built is C_{max} with W₀ coefficients
        let w0 = a.action.size() * n.saturating_sub(1) + 1;
        let dim = n
            .checked_pow(params.max_degree as u32)
            .and_then(|p| p.checked_mul(w0))
            .unwrap_or(usize::MAX);
        if dim > cfg.size_cap {
            return Err(InstanceError::Cap(format!(
                "action `{}` needs chain groups of dimension {dim} at degree {}, above the size cap {}",
                a.name, params.max_degree, cfg.size_cap
            )));
        }
    }
    Ok(())
}

impl Instance {
    pub fn link_names(&self) -> impl Iterator<Item = &String> {
        self.doc.links.keys()
    }

    pub fn link_doc(&self, name: &str) -> Option<&LinkDoc> {
        self.doc.links.get(name)
    }

    /// Builds the link's data, deriving `psi`, `c`, `c'` from `phi` unless
    /// the document gives them.
    pub fn build_link(&self, name: &str) -> Option<Result<CoeLink, CoeError>> {
        let l = self.doc.links.get(name)?;
        let source = self.actions[&l.source].action.clone();
        let target = self.actions[&l.target].action.clone();
        Some(match (&l.psi, &l.c, &l.cprime) {
            (Some(psi), Some(c), Some(cp)) => CoeLink::from_tables(
                source,
                target,
                l.phi.clone(),
                psi.clone(),
                c.clone(),
                cp.clone(),
            ),
            _ => derive_coe(source, target, l.phi.clone()),
        })
    }

    pub fn to_json(&self) -> String {
        to_json(&self.doc)
    }
}

/// Canonical pretty-printed form of a document.
pub fn to_json(doc: &InstanceDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let inst = parse_instance(r#"{"groups": {"e": {"kind": "trivial"}}}"#).unwrap();
        assert_eq!(inst.groups["e"].order(), 1);
        assert!(inst.actions.is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err =
            parse_instance("{\n  \"groups\": {\"z\": {\"kind\": \"cyclic\", \"ordr\": 2}}\n}")
                .unwrap_err();
        match err {
            InstanceError::Syntax { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("ordr"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance(r#"{"extra": 1}"#),
            Err(InstanceError::Syntax { .. })
        ));
    }

    #[test]
    fn undefined_action_is_reported() {
        let text = r#"{
            "groups": {"z2": {"kind": "cyclic", "order": 2}},
            "actions": {"a": {"kind": "regular", "group": "z2"}},
            "links": {"l": {"source": "a", "target": "b", "phi": [0, 1]}}
        }"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(
            err,
            InstanceError::Unresolved {
                what: "link",
                name: "l".into(),
                kind: "action",
                missing: "b".into()
            }
        );
    }

    #[test]
    fn caps_are_checked() {
        let text = r#"{
            "groups": {"z": {"kind": "cyclic", "order": 12}},
            "actions": {"a": {"kind": "regular", "group": "z"}},
            "params": {"max_degree": 3}
        }"#;
        assert!(matches!(parse_instance(text), Err(InstanceError::Cap(_))));
        let over = ParamsDoc {
            max_degree: Some(5),
            ..Default::default()
        };
        assert!(matches!(
            parse_instance_with("{}", &over),
            Err(InstanceError::Cap(_))
        ));
    }
}
