//! Finite discrete spaces, subsets of them, and permutation actions.
//!
//! Every subset of a finite discrete space is clopen, and "points with
//! trivial stabilizer are dense" means every point has trivial stabilizer,
//! so topological freeness is checked pointwise.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::Group;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
}

impl FiniteSpace {
    pub fn new(size: usize) -> Self {
        assert!(size >= 1, "a space needs at least one point");
        FiniteSpace {
            labels: (0..size).map(|x| x.to_string()).collect(),
        }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        assert!(!labels.is_empty(), "a space needs at least one point");
        FiniteSpace { labels }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A subset of a finite space, one bit per point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClopenSet {
    bits: Vec<bool>,
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.points().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ClopenSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.points())
    }
}

impl ClopenSet {
    pub fn empty(size: usize) -> Self {
        ClopenSet {
            bits: vec![false; size],
        }
    }

    pub fn full(size: usize) -> Self {
        ClopenSet {
            bits: vec![true; size],
        }
    }

    pub fn singleton(size: usize, x: usize) -> Self {
        let mut s = Self::empty(size);
        s.bits[x] = true;
        s
    }

    pub fn from_points(size: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(size);
        for x in points {
            s.bits[x] = true;
        }
        s
    }

    pub fn from_predicate(size: usize, pred: impl Fn(usize) -> bool) -> Self {
        ClopenSet {
            bits: (0..size).map(pred).collect(),
        }
    }

    pub fn space_size(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits[x]
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(x, _)| x)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|b| *b)
    }

    pub fn intersect(&self, other: &ClopenSet) -> ClopenSet {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn complement(&self) -> ClopenSet {
        ClopenSet {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.intersect(other).is_empty()
    }

    fn zip_with(&self, other: &ClopenSet, f: impl Fn(bool, bool) -> bool) -> ClopenSet {
        assert_eq!(
            self.bits.len(),
            other.bits.len(),
            "sets live in different spaces"
        );
        ClopenSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// The image `{ f(x) : x in self }` under a map of points.
    pub fn image(&self, f: impl Fn(usize) -> usize) -> ClopenSet {
        Self::from_points(self.bits.len(), self.points().map(f))
    }
}

/// A finite group acting on a finite space by permutations.
#[derive(Clone, PartialEq, Eq)]
pub struct Action {
    group: Arc<Group>,
    space: FiniteSpace,
    // table[g * size + x] = g x
    table: Vec<usize>,
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Action(|G|={}, |X|={})",
            self.group.order(),
            self.space.size()
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("expected one permutation per group element ({expected}), got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("entry for element {g} is not a permutation of the {size} points")]
    NotPermutation { g: usize, size: usize },
    #[error("identity moves point {x}")]
    IdentityMoves { x: usize },
    #[error("g({g}) g'({g2}) x({x}) differs from (g g') x")]
    Compatibility { g: usize, g2: usize, x: usize },
}

/// Result of the freeness check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Freeness {
    pub free: bool,
    /// `(g, x)` with `g != e` and `g x = x`.
    pub witness: Option<(usize, usize)>,
}

impl Action {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.space.size() + x]
    }

    /// Left translation of a group on itself.
    pub fn regular(group: Arc<Group>) -> Self {
        let n = group.order();
        let table = (0..n)
            .flat_map(|g| (0..n).map(move |x| (g, x)))
            .map(|(g, x)| group.mul(g, x))
            .collect();
        Action {
            space: FiniteSpace::with_labels(group.labels().to_vec()),
            group,
            table,
        }
    }

    pub fn trivial(group: Arc<Group>, space: FiniteSpace) -> Self {
        let size = space.size();
        let table = (0..group.order()).flat_map(|_| 0..size).collect();
        Action {
            group,
            space,
            table,
        }
    }

    /// The table as one permutation per group element.
    pub fn permutations(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.space.size())
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn translate(&self, g: usize, s: &ClopenSet) -> ClopenSet {
        s.image(|x| self.act(g, x))
    }
}

pub fn build_action(
    group: Arc<Group>,
    space: FiniteSpace,
    perms: Vec<Vec<usize>>,
) -> Result<Action, ActionError> {
    let n = group.order();
    let size = space.size();
    if perms.len() != n {
        return Err(ActionError::WrongCount {
            expected: n,
            got: perms.len(),
        });
    }
    for (g, p) in perms.iter().enumerate() {
        let mut seen = vec![false; size];
        let ok = p.len() == size
            && p.iter()
                .all(|&y| y < size && !std::mem::replace(&mut seen[y], true));
        if !ok {
            return Err(ActionError::NotPermutation { g, size });
        }
    }
    let e = group.identity();
    if let Some(x) = (0..size).find(|&x| perms[e][x] != x) {
        return Err(ActionError::IdentityMoves { x });
    }
    for g in 0..n {
        for g2 in 0..n {
            let gg = group.mul(g, g2);
            if let Some(x) = (0..size).find(|&x| perms[g][perms[g2][x]] != perms[gg][x]) {
                return Err(ActionError::Compatibility { g, g2, x });
            }
        }
    }
    Ok(Action {
        group,
        space,
        table: perms.into_iter().flatten().collect(),
    })
}

pub fn check_topologically_free(action: &Action) -> Freeness {
    let e = action.group.identity();
    let witness = action
        .group
        .elements()
        .filter(|&g| g != e)
        .flat_map(|g| (0..action.size()).map(move |x| (g, x)))
        .find(|&(g, x)| action.act(g, x) == x);
    Freeness {
        free: witness.is_none(),
        witness,
    }
}

/// Orbit decomposition, ordered by smallest point.
pub fn orbits(action: &Action) -> Vec<ClopenSet> {
    let size = action.size();
    let mut assigned = vec![false; size];
    let mut out = Vec::new();
    for x in 0..size {
        if assigned[x] {
            continue;
        }
        let orbit = ClopenSet::from_points(size, action.group.elements().map(|g| action.act(g, x)));
        for y in orbit.points() {
            assigned[y] = true;
        }
        out.push(orbit);
    }
    out
}
