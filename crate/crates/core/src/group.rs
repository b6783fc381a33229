//! Finite groups stored as full multiplication tables.

use std::fmt;

use thiserror::Error;

use crate::report::{Check, VerificationReport};

/// A finite group. Elements are the indices `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(order={}, labels={:?})", self.order, self.labels)
    }
}

/// Descriptor for the supported group families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    /// Symmetries of the n-gon, order 2n.
    Dihedral(usize),
    /// Permutations of `0..n`, n at most 4.
    Symmetric(usize),
    Explicit {
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group size must be at least 1")]
    Empty,
    #[error("symmetric group S{0} is too large (at most S4)")]
    TooLarge(usize),
    #[error("table is not square: row {row} has length {len}, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("axiom `{axiom}` fails: {witness}")]
    Axiom { axiom: String, witness: String },
}

impl Group {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Product `a_0 a_1 ... a_{k-1}`; the identity for an empty slice.
    pub fn product(&self, elems: &[usize]) -> usize {
        elems.iter().fold(self.identity, |acc, &a| self.mul(acc, a))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Group {
            order: n,
            mul,
            inv,
            identity: 0,
            labels: (0..n).map(|a| a.to_string()).collect(),
        }
    }

    /// Direct product; element `(a, b)` has index `a * |B| + b`.
    pub fn product_of(a: &Group, b: &Group) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let split = |i: usize| (i / nb, i % nb);
        let mut mul = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let ((ia, ib), (ja, jb)) = (split(i), split(j));
                mul.push(a.mul(ia, ja) * nb + b.mul(ib, jb));
            }
        }
        let inv = (0..n)
            .map(|i| {
                let (ia, ib) = split(i);
                a.inv(ia) * nb + b.inv(ib)
            })
            .collect();
        let labels = (0..n)
            .map(|i| {
                let (ia, ib) = split(i);
                format!("({},{})", a.label(ia), b.label(ib))
            })
            .collect();
        Group {
            order: n,
            mul,
            inv,
            identity: a.identity * nb + b.identity,
            labels,
        }
    }

    /// Dihedral group of order 2n; `s^f r^k` has index `f * n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|f| (0..n).map(move |k| (f, k))).collect();
        let index = |(f, k): (usize, usize)| f * n + k;
        // r^k s = s r^{-k}
        let compose = |(f1, k1): (usize, usize), (f2, k2): (usize, usize)| {
            let k1 = if f2 == 1 { (n - k1) % n } else { k1 };
            ((f1 + f2) % 2, (k1 + k2) % n)
        };
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| index(compose(a, b))).collect())
            .collect();
        let labels = elems
            .iter()
            .map(|&(f, k)| {
                if f == 0 {
                    format!("r{k}")
                } else {
                    format!("sr{k}")
                }
            })
            .collect();
        Self::from_table_unchecked(table, Some(labels))
    }

    /// Symmetric group on `0..n` with permutations in lexicographic order;
    /// `mul(a, b)` applies `b` first.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > 4 {
            return Err(GroupError::TooLarge(n));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&(0..n).map(|i| a[b[i]]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(usize::to_string).collect::<Vec<_>>().join(""))
            .collect();
        Ok(Self::from_table_unchecked(table, Some(labels)))
    }

    /// Validates `table` against every group axiom.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    order,
                });
            }
            if let Some(col) = r.iter().position(|&v| v >= order) {
                return Err(GroupError::OutOfRange {
                    row,
                    col,
                    value: r[col],
                });
            }
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(GroupError::LabelCount {
                    expected: order,
                    got: l.len(),
                });
            }
        }
        let group = Self::from_table_unchecked(table, labels);
        let report = verify_group_axioms(&group);
        let failure = report.failures().next().map(|check| GroupError::Axiom {
            axiom: check.name.clone(),
            witness: check.witness.clone().unwrap_or_default(),
        });
        match failure {
            None => Ok(group),
            Some(err) => Err(err),
        }
    }

    /// Wraps a square table without checking the axioms. Identity and
    /// inverses are found by search; when missing, index 0 stands in and
    /// [`verify_group_axioms`] reports the failure.
    pub fn from_table_unchecked(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Self {
        let order = table.len();
        assert!(order > 0 && table.iter().all(|r| r.len() == order));
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| mul[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .unwrap_or(0);
        let inv = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == identity && at(b, a) == identity)
                    .unwrap_or(identity)
            })
            .collect();
        Group {
            order,
            mul,
            inv,
            identity,
            labels: labels.unwrap_or_else(|| (0..order).map(|a| a.to_string()).collect()),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|v| if v >= first { v + 1 } else { v }));
            out.push(p);
        }
    }
    out
}

pub fn build_group(spec: &GroupSpec) -> Result<Group, GroupError> {
    match spec {
        GroupSpec::Cyclic(0) | GroupSpec::Dihedral(0) => Err(GroupError::Empty),
        GroupSpec::Cyclic(n) => Ok(Group::cyclic(*n)),
        GroupSpec::Dihedral(n) => Ok(Group::dihedral(*n)),
        GroupSpec::Symmetric(n) => Group::symmetric(*n),
        GroupSpec::Product(a, b) => Ok(Group::product_of(&build_group(a)?, &build_group(b)?)),
        GroupSpec::Explicit { table, labels } => Group::from_table(table.clone(), labels.clone()),
    }
}

pub fn verify_group_axioms(group: &Group) -> VerificationReport {
    let n = group.order;
    let e = group.identity;
    let mut report = VerificationReport::new("group axioms");

    let mut latin = None;
    'outer: for a in 0..n {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for b in 0..n {
            let (r, c) = (group.mul(a, b), group.mul(b, a));
            if row[r] {
                latin = Some(format!("row {} repeats {}", group.label(a), group.label(r)));
                break 'outer;
            }
            if col[c] {
                latin = Some(format!(
                    "column {} repeats {}",
                    group.label(a),
                    group.label(c)
                ));
                break 'outer;
            }
            row[r] = true;
            col[c] = true;
        }
    }
    report.push(Check::from_witness("latin square", (n * n) as u64, latin));

    let mut assoc = None;
    'assoc: for a in 0..n {
        for b in 0..n {
            let ab = group.mul(a, b);
            for c in 0..n {
                if group.mul(ab, c) != group.mul(a, group.mul(b, c)) {
                    assoc = Some(format!("(a,b,c) = ({a},{b},{c})"));
                    break 'assoc;
                }
            }
        }
    }
    report.push(Check::from_witness(
        "associativity",
        (n * n * n) as u64,
        assoc,
    ));

    let ident = (0..n)
        .find(|&a| group.mul(e, a) != a || group.mul(a, e) != a)
        .map(|a| format!("e = {e}, a = {a}"));
    report.push(Check::from_witness("identity", n as u64, ident));

    let inverse = (0..n)
        .find(|&a| group.mul(group.inv(a), a) != e || group.mul(a, group.inv(a)) != e)
        .map(|a| format!("{} has no two-sided inverse", group.label(a)));
    report.push(Check::from_witness("inverses", n as u64, inverse));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_pass_axioms() {
        for g in [
            Group::cyclic(1),
            Group::cyclic(4),
            Group::product_of(&Group::cyclic(2), &Group::cyclic(2)),
            Group::dihedral(3),
            Group::symmetric(3).unwrap(),
            Group::symmetric(4).unwrap(),
        ] {
            assert!(verify_group_axioms(&g).passed(), "{g:?}");
        }
    }

    #[test]
    fn cyclic_four() {
        let g = Group::cyclic(4);
        assert_eq!(g.mul(1, 3), 0);
        assert_eq!(g.inv(1), 3);
    }

    #[test]
    fn klein_elements_are_self_inverse() {
        let k = build_group(&GroupSpec::Product(
            Box::new(GroupSpec::Cyclic(2)),
            Box::new(GroupSpec::Cyclic(2)),
        ))
        .unwrap();
        assert_eq!(k.order(), 4);
        assert!(k.elements().all(|a| k.mul(a, a) == k.identity()));
        assert_eq!(k.label(3), "(1,1)");
    }

    #[test]
    fn dihedral_is_nonabelian() {
        let d = Group::dihedral(3);
        assert_eq!(d.order(), 6);
        assert_ne!(d.mul(1, 3), d.mul(3, 1));
    }

    #[test]
    fn idempotent_table_fails_inverses() {
        let g = Group::from_table_unchecked(vec![vec![0, 1], vec![1, 1]], None);
        let report = verify_group_axioms(&g);
        assert!(!report.check("inverses").unwrap().passed);
        assert!(report.check("associativity").unwrap().passed);
        assert!(report.check("identity").unwrap().passed);
        let err = Group::from_table(vec![vec![0, 1], vec![1, 1]], None).unwrap_err();
        assert!(matches!(err, GroupError::Axiom { .. }));
    }

    #[test]
    fn missing_identity_is_named() {
        // constant table: no identity
        let err = Group::from_table(vec![vec![0, 0], vec![0, 0]], None).unwrap_err();
        assert!(matches!(err, GroupError::Axiom { .. }));
        assert_eq!(
            build_group(&GroupSpec::Symmetric(5)),
            Err(GroupError::TooLarge(5))
        );
    }
}
