//! Continuous orbit equivalence data between two free actions.
//!
//! On finite discrete spaces continuity of `phi`, `psi`, `c`, `c'` is
//! automatic, so only the algebraic identities are checked.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::action::{check_topologically_free, Action, ClopenSet};
use crate::report::{Check, VerificationReport};

/// Which of the two actions a quantity lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `G ↷ X`
    G,
    /// `H ↷ Y`
    H,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::G => "G",
            Side::H => "H",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoeLink {
    source: Arc<Action>,
    target: Arc<Action>,
    phi: Vec<usize>,
    psi: Vec<usize>,
    // c[g * |X| + x]
    c: Vec<usize>,
    // cprime[h * |Y| + y]
    cprime: Vec<usize>,
}

impl fmt::Debug for CoeLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeLink")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("phi", &self.phi)
            .field("psi", &self.psi)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeError {
    #[error("hypothesis violation: {side}-action is not free (element {g} fixes point {x})")]
    HypothesisViolation { side: Side, g: usize, x: usize },
    #[error("orbit mismatch: phi({g}·{x}) is not in the orbit of phi({x})")]
    OrbitMismatch { g: usize, x: usize },
    #[error("orbit mismatch: psi({h}·{y}) is not in the orbit of psi({y})")]
    ReverseOrbitMismatch { h: usize, y: usize },
    #[error("phi is not a bijection between the spaces")]
    NotBijection,
    #[error("malformed tables: {0}")]
    Shape(String),
}

impl CoeLink {
    pub fn source(&self) -> &Arc<Action> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Action> {
        &self.target
    }

    pub fn action(&self, side: Side) -> &Arc<Action> {
        match side {
            Side::G => &self.source,
            Side::H => &self.target,
        }
    }

    pub fn phi(&self, x: usize) -> usize {
        self.phi[x]
    }

    pub fn psi(&self, y: usize) -> usize {
        self.psi[y]
    }

    pub fn c(&self, g: usize, x: usize) -> usize {
        self.c[g * self.source.size() + x]
    }

    pub fn cprime(&self, h: usize, y: usize) -> usize {
        self.cprime[h * self.target.size() + y]
    }

    pub fn phi_table(&self) -> &[usize] {
        &self.phi
    }

    pub fn psi_table(&self) -> &[usize] {
        &self.psi
    }

    /// `c` as rows indexed by group element.
    pub fn c_table(&self) -> Vec<Vec<usize>> {
        self.c
            .chunks(self.source.size())
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn cprime_table(&self) -> Vec<Vec<usize>> {
        self.cprime
            .chunks(self.target.size())
            .map(<[usize]>::to_vec)
            .collect()
    }

    /// Assembles a link from explicit tables, checking only shapes and index
    /// ranges. Use [`verify_coe`] for the identities.
    pub fn from_tables(
        source: Arc<Action>,
        target: Arc<Action>,
        phi: Vec<usize>,
        psi: Vec<usize>,
        c: Vec<Vec<usize>>,
        cprime: Vec<Vec<usize>>,
    ) -> Result<Self, CoeError> {
        let (nx, ny) = (source.size(), target.size());
        let (ng, nh) = (source.group().order(), target.group().order());
        let shape = |what: &str| Err(CoeError::Shape(what.to_string()));
        if phi.len() != nx || phi.iter().any(|&y| y >= ny) {
            return shape("phi must map every point of X into Y");
        }
        if psi.len() != ny || psi.iter().any(|&x| x >= nx) {
            return shape("psi must map every point of Y into X");
        }
        if c.len() != ng
            || c.iter()
                .any(|r| r.len() != nx || r.iter().any(|&h| h >= nh))
        {
            return shape("c must be a |G| x |X| table of H-elements");
        }
        if cprime.len() != nh
            || cprime
                .iter()
                .any(|r| r.len() != ny || r.iter().any(|&g| g >= ng))
        {
            return shape("c' must be a |H| x |Y| table of G-elements");
        }
        Ok(CoeLink {
            source,
            target,
            phi,
            psi,
            c: c.into_iter().flatten().collect(),
            cprime: cprime.into_iter().flatten().collect(),
        })
    }

    /// Same link with `c` and `c'` replaced; intended for building
    /// corrupted fixtures.
    pub fn with_tables(
        &self,
        c: Vec<Vec<usize>>,
        cprime: Vec<Vec<usize>>,
    ) -> Result<Self, CoeError> {
        Self::from_tables(
            self.source.clone(),
            self.target.clone(),
            self.phi.clone(),
            self.psi.clone(),
            c,
            cprime,
        )
    }

    /// The same data read from the other side: `psi`, `c'` become the
    /// forward map and cocycle.
    pub fn reversed(&self) -> CoeLink {
        CoeLink {
            source: self.target.clone(),
            target: self.source.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            c: self.cprime.clone(),
            cprime: self.c.clone(),
        }
    }
}

fn invert(map: &[usize], size: usize) -> Option<Vec<usize>> {
    if map.len() != size {
        return None;
    }
    let mut inv = vec![usize::MAX; size];
    for (x, &y) in map.iter().enumerate() {
        if y >= size || inv[y] != usize::MAX {
            return None;
        }
        inv[y] = x;
    }
    Some(inv)
}

/// Solves `phi(g x) = c(g, x) phi(x)` for `c`, using freeness of the target.
fn derive_cocycle(source: &Action, target: &Action, phi: &[usize]) -> Result<Vec<usize>, CoeError> {
    let nx = source.size();
    let mut c = Vec::with_capacity(source.group().order() * nx);
    for g in source.group().elements() {
        for x in 0..nx {
            let (y, gy) = (phi[x], phi[source.act(g, x)]);
            let h = target
                .group()
                .elements()
                .find(|&h| target.act(h, y) == gy)
                .ok_or(CoeError::OrbitMismatch { g, x })?;
            c.push(h);
        }
    }
    Ok(c)
}

pub fn derive_coe(
    source: Arc<Action>,
    target: Arc<Action>,
    phi: Vec<usize>,
) -> Result<CoeLink, CoeError> {
    for (side, action) in [(Side::G, &source), (Side::H, &target)] {
        if let Some((g, x)) = check_topologically_free(action).witness {
            return Err(CoeError::HypothesisViolation { side, g, x });
        }
    }
    let psi = invert(&phi, target.size())
        .filter(|_| source.size() == target.size())
        .ok_or(CoeError::NotBijection)?;
    let c = derive_cocycle(&source, &target, &phi)?;
    let cprime = derive_cocycle(&target, &source, &psi).map_err(|e| match e {
        CoeError::OrbitMismatch { g: h, x: y } => CoeError::ReverseOrbitMismatch { h, y },
        other => other,
    })?;
    Ok(CoeLink {
        source,
        target,
        phi,
        psi,
        c,
        cprime,
    })
}

/// Runs `cases` and records the first failing witness.
fn exhaustive<I, F>(name: &str, cases: I, fails: F) -> Check
where
    I: IntoIterator,
    F: Fn(&I::Item) -> Option<String>,
{
    let mut count = 0u64;
    for case in cases {
        count += 1;
        if let Some(w) = fails(&case) {
            return Check::fail(name, count, w);
        }
    }
    Check::pass(name, count)
}

pub fn verify_coe(link: &CoeLink) -> VerificationReport {
    let (a, b) = (&*link.source, &*link.target);
    let (gg, hh) = (a.group(), b.group());
    let (nx, ny) = (a.size(), b.size());
    let pairs = |n: usize, m: usize| (0..n).flat_map(move |i| (0..m).map(move |j| (i, j)));
    let triples = |n: usize, m: usize| {
        (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..m).map(move |k| (i, j, k))))
    };
    let mut report = VerificationReport::new("COE identities");

    report.push(exhaustive("psi inverts phi", 0..nx.max(ny), |&i| {
        if nx != ny {
            return Some(format!("|X| = {nx} but |Y| = {ny}"));
        }
        (link.psi(link.phi(i)) != i || link.phi(link.psi(i)) != i).then(|| format!("point {i}"))
    }));
    report.push(exhaustive(
        "COE identity phi(gx) = c(g,x) phi(x)",
        pairs(gg.order(), nx),
        |&(g, x)| {
            (link.phi(a.act(g, x)) != b.act(link.c(g, x), link.phi(x)))
                .then(|| format!("(g, x) = ({g}, {x})"))
        },
    ));
    report.push(exhaustive(
        "COE identity psi(hy) = c'(h,y) psi(y)",
        pairs(hh.order(), ny),
        |&(h, y)| {
            (link.psi(b.act(h, y)) != a.act(link.cprime(h, y), link.psi(y)))
                .then(|| format!("(h, y) = ({h}, {y})"))
        },
    ));
    report.push(exhaustive(
        "cocycle identity for c",
        triples(gg.order(), nx),
        |&(g1, g2, x)| {
            let lhs = link.c(gg.mul(g1, g2), x);
            let rhs = hh.mul(link.c(g1, a.act(g2, x)), link.c(g2, x));
            (lhs != rhs).then(|| format!("(g1, g2, x) = ({g1}, {g2}, {x})"))
        },
    ));
    report.push(exhaustive(
        "cocycle identity for c'",
        triples(hh.order(), ny),
        |&(h1, h2, y)| {
            let lhs = link.cprime(hh.mul(h1, h2), y);
            let rhs = gg.mul(link.cprime(h1, b.act(h2, y)), link.cprime(h2, y));
            (lhs != rhs).then(|| format!("(h1, h2, y) = ({h1}, {h2}, {y})"))
        },
    ));
    report.push(exhaustive(
        "inverse relation c'(c(g,x), phi(x)) = g",
        pairs(gg.order(), nx),
        |&(g, x)| {
            (link.cprime(link.c(g, x), link.phi(x)) != g).then(|| format!("(g, x) = ({g}, {x})"))
        },
    ));
    report.push(exhaustive(
        "inverse relation c(c'(h,y), psi(y)) = h",
        pairs(hh.order(), ny),
        |&(h, y)| {
            (link.c(link.cprime(h, y), link.psi(y)) != h).then(|| format!("(h, y) = ({h}, {y})"))
        },
    ));
    report.push(exhaustive(
        "g -> c(g,x) is a bijection G -> H",
        0..nx,
        |&x| {
            if gg.order() != hh.order() {
                return Some(format!("|G| = {} but |H| = {}", gg.order(), hh.order()));
            }
            let mut seen = vec![false; hh.order()];
            gg.elements()
                .any(|g| std::mem::replace(&mut seen[link.c(g, x)], true))
                .then(|| format!("x = {x}"))
        },
    ));
    report
}

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("hypothesis violation: {side}-action is not free (element {g} fixes point {x})")]
    NotFree { side: Side, g: usize, x: usize },
    #[error("link fails verification: {}", .0.failures().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", "))]
    Failed(VerificationReport),
}

/// A link whose identities have been checked and whose actions are free.
/// Transfer constructions accept only this type.
#[derive(Clone, Debug)]
pub struct VerifiedLink {
    link: Arc<CoeLink>,
    assumed: bool,
}

impl VerifiedLink {
    pub fn new(link: CoeLink) -> Result<Self, LinkError> {
        for side in [Side::G, Side::H] {
            if let Some((g, x)) = check_topologically_free(link.action(side)).witness {
                return Err(LinkError::NotFree { side, g, x });
            }
        }
        let report = verify_coe(&link);
        if !report.passed() {
            return Err(LinkError::Failed(report));
        }
        Ok(VerifiedLink {
            link: Arc::new(link),
            assumed: false,
        })
    }

    /// Skips verification. Only for negative controls that push a broken
    /// link through the transfer machinery to watch it fail.
    pub fn assume_verified(link: CoeLink) -> Self {
        VerifiedLink {
            link: Arc::new(link),
            assumed: true,
        }
    }

    pub fn is_assumed(&self) -> bool {
        self.assumed
    }

    pub fn link(&self) -> &CoeLink {
        &self.link
    }

    pub fn reversed(&self) -> VerifiedLink {
        VerifiedLink {
            link: Arc::new(self.link.reversed()),
            assumed: self.assumed,
        }
    }
}

impl Deref for VerifiedLink {
    type Target = CoeLink;

    fn deref(&self) -> &CoeLink {
        &self.link
    }
}

/// `X_{g,h} = {x : c(g⁻¹, x) = h⁻¹}` on the G side, or
/// `Y_{h,g} = {y : c'(h⁻¹, y) = g⁻¹}` on the H side.
pub fn level_set(link: &CoeLink, side: Side, g: usize, h: usize) -> ClopenSet {
    let (gg, hh) = (link.source.group(), link.target.group());
    match side {
        Side::G => {
            let (gi, hi) = (gg.inv(g), hh.inv(h));
            ClopenSet::from_predicate(link.source.size(), |x| link.c(gi, x) == hi)
        }
        Side::H => {
            let (gi, hi) = (gg.inv(g), hh.inv(h));
            ClopenSet::from_predicate(link.target.size(), |y| link.cprime(hi, y) == gi)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("tuple lengths differ: {own} vs {other}")]
pub struct TupleLengthMismatch {
    pub own: usize,
    pub other: usize,
}

/// The set `X_{t0} ∩ a_0 X_{t1} ∩ a_0 a_1 X_{t2} ∩ ...` where `X_{ti}` is the
/// level set for `(own[i], other[i])` and the translating elements `a_i` are
/// given explicitly. `own` and `other` are elements of the acting group on
/// `side` and of the opposite group respectively.
pub fn tuple_set_with_outer(
    link: &CoeLink,
    side: Side,
    own: &[usize],
    other: &[usize],
    outer: &[usize],
) -> Result<ClopenSet, TupleLengthMismatch> {
    if own.len() != other.len() {
        return Err(TupleLengthMismatch {
            own: own.len(),
            other: other.len(),
        });
    }
    if own.len() > 1 && outer.len() + 1 < own.len() {
        return Err(TupleLengthMismatch {
            own: own.len(),
            other: outer.len() + 1,
        });
    }
    let action = link.action(side);
    let group = action.group();
    let level = |a: usize, b: usize| match side {
        Side::G => level_set(link, Side::G, a, b),
        Side::H => level_set(link, Side::H, b, a),
    };
    let mut set = ClopenSet::full(action.size());
    let mut prefix = group.identity();
    for (i, (&a, &b)) in own.iter().zip(other).enumerate() {
        if i > 0 {
            prefix = group.mul(prefix, outer[i - 1]);
        }
        set = set.intersect(&action.translate(prefix, &level(a, b)));
        if set.is_empty() {
            break;
        }
    }
    Ok(set)
}

/// `[t_0, …, t_{n-1}] = X_{t0} ∩ g_0 X_{t1} ∩ … ∩ (g_0⋯g_{n-2}) X_{t_{n-1}}`,
/// the translating elements being the prefix products of `own` itself.
/// On the H side the roles are mirrored: `own` is an H-tuple and `other` a
/// G-tuple. The empty tuple gives the whole space.
pub fn tuple_set(
    link: &CoeLink,
    side: Side,
    own: &[usize],
    other: &[usize],
) -> Result<ClopenSet, TupleLengthMismatch> {
    tuple_set_with_outer(link, side, own, other, own)
}

/// Which tuple-set convention a caller follows. In the chain complex the
/// translating elements are the tuple's own entries; in the cochain complex
/// they are the outer arguments `g_0, …, g_{n-2}` of the cochain, which are
/// the same entries after relabelling, so both produce identical sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleConvention {
    Chain,
    Cochain,
}

pub fn tuple_set_for(
    link: &CoeLink,
    convention: TupleConvention,
    side: Side,
    own: &[usize],
    other: &[usize],
    outer: Option<&[usize]>,
) -> Result<ClopenSet, TupleLengthMismatch> {
    match (convention, outer) {
        (TupleConvention::Cochain, Some(outer)) => {
            tuple_set_with_outer(link, side, own, other, outer)
        }
        _ => tuple_set(link, side, own, other),
    }
}

fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = idx % base;
            idx /= base;
        }
        t
    })
}

/// Checks that `pieces` are pairwise disjoint with union `whole`.
fn disjoint_union(whole: &ClopenSet, pieces: &[ClopenSet]) -> Result<(), String> {
    let mut acc = ClopenSet::empty(whole.space_size());
    for p in pieces {
        if !acc.is_disjoint(p) {
            return Err(format!("pieces overlap at {:?}", acc.intersect(p)));
        }
        acc = acc.union(p);
    }
    if &acc != whole {
        return Err(format!("union {acc:?} differs from {whole:?}"));
    }
    Ok(())
}

/// Exhaustive check of the disjoint-union laws satisfied by level sets and
/// tuple sets, for tuples of length at most `max_degree`.
pub fn verify_partition_laws(link: &CoeLink, max_degree: usize) -> VerificationReport {
    let mut report = VerificationReport::new("partition laws");
    for side in [Side::G, Side::H] {
        let view = match side {
            Side::G => link.clone(),
            Side::H => link.reversed(),
        };
        report.extend(partition_laws_one_side(&view, max_degree, side));
    }
    report
}

fn partition_laws_one_side(link: &CoeLink, max_degree: usize, side: Side) -> VerificationReport {
    let a = &link.source;
    let (gg, hh) = (a.group(), link.target.group());
    let (ng, nh) = (gg.order(), hh.order());
    let full = ClopenSet::full(a.size());
    // translated level sets p·X_{g,h}, indexed [p][g·|H| + h]
    let levels: Vec<ClopenSet> = (0..ng)
        .flat_map(|g| (0..nh).map(move |h| (g, h)))
        .map(|(g, h)| level_set(link, Side::G, g, h))
        .collect();
    let shifted: Vec<Vec<ClopenSet>> = (0..ng)
        .map(|p| levels.iter().map(|s| a.translate(p, s)).collect())
        .collect();
    let lv = |g: usize, h: usize| &levels[g * nh + h];
    let tlv = |p: usize, g: usize, h: usize| &shifted[p][g * nh + h];
    let mut report = VerificationReport::new("");
    let tag = |s: &str| format!("{s} [{side} side]");

    report.push(exhaustive(
        &tag("level sets partition the space"),
        0..ng,
        |&g| {
            let pieces: Vec<_> = (0..nh).map(|h| lv(g, h).clone()).collect();
            disjoint_union(&full, &pieces)
                .err()
                .map(|e| format!("g = {g}: {e}"))
        },
    ));

    if max_degree >= 2 {
        let cases = tuples(ng, 2).flat_map(|t| (0..nh).map(move |k| (t[0], t[1], k)));
        report.push(exhaustive(
            &tag("product level set splits over factorizations"),
            cases,
            |&(g0, g1, k)| {
                let pieces: Vec<_> = (0..nh)
                    .map(|i| lv(g0, i).intersect(tlv(g0, g1, hh.mul(hh.inv(i), k))))
                    .collect();
                disjoint_union(lv(gg.mul(g0, g1), k), &pieces)
                    .err()
                    .map(|e| format!("(g0, g1, k) = ({g0}, {g1}, {k}): {e}"))
            },
        ));

        // p X_{g, h} ∩ p g X_{ḡ, h̄} ∩ p g ḡ X_t summed over h h̄ = h_i equals
        // p X_{g ḡ, h_i} ∩ p g ḡ X_t; p ranges over all of G, which covers
        // every prefix product of a tuple.
        let cases = tuples(ng, 4).flat_map(|t| tuples(nh, 2).map(move |u| (t.clone(), u)));
        report.push(exhaustive(
            &tag("refinement of adjacent pairs"),
            cases,
            |(t, u)| {
                let (p, g, gbar, gn) = (t[0], t[1], t[2], t[3]);
                let (hi, hn) = (u[0], u[1]);
                let pg = gg.mul(p, g);
                let pggbar = gg.mul(pg, gbar);
                let tail = tlv(pggbar, gn, hn);
                let pieces: Vec<_> = (0..nh)
                    .map(|h| {
                        tlv(p, g, h)
                            .intersect(tlv(pg, gbar, hh.mul(hh.inv(h), hi)))
                            .intersect(tail)
                    })
                    .collect();
                let whole = tlv(p, gg.mul(g, gbar), hi).intersect(tail);
                disjoint_union(&whole, &pieces).err().map(|e| {
                    format!("(p, g, gbar, g', h_i, h') = ({p}, {g}, {gbar}, {gn}, {hi}, {hn}): {e}")
                })
            },
        ));

        let cases = (2..=max_degree).flat_map(move |m| {
            tuples(ng, m).flat_map(move |gt| {
                (1..m).flat_map(move |i| {
                    let gt = gt.clone();
                    tuples(nh, m - 1).map(move |ht| (gt.clone(), i, ht))
                })
            })
        });
        report.push(exhaustive(
            &tag("merged tuple set splits into full tuple sets"),
            cases,
            |(gt, i, ht)| {
                let i = *i;
                let mut merged_g = gt[..i - 1].to_vec();
                merged_g.push(gg.mul(gt[i - 1], gt[i]));
                merged_g.extend_from_slice(&gt[i + 1..]);
                let whole = tuple_set(link, Side::G, &merged_g, ht).expect("lengths agree");
                let hs = ht[i - 1];
                let pieces: Vec<_> = (0..nh)
                    .map(|a0| {
                        let mut full_h = ht[..i - 1].to_vec();
                        full_h.extend_from_slice(&[a0, hh.mul(hh.inv(a0), hs)]);
                        full_h.extend_from_slice(&ht[i..]);
                        tuple_set(link, Side::G, gt, &full_h).expect("lengths agree")
                    })
                    .collect();
                disjoint_union(&whole, &pieces)
                    .err()
                    .map(|e| format!("g-tuple {gt:?}, merge at {i}, h-tuple {ht:?}: {e}"))
            },
        ));
    }
    report
}

/// The map `g ↦ c(g, x₀)` together with a bijectivity certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QiMap {
    pub basepoint: usize,
    pub map: Vec<usize>,
    pub bijective: bool,
}

pub fn qi_map(link: &VerifiedLink, basepoint: usize) -> QiMap {
    let ng = link.source.group().order();
    let map: Vec<usize> = (0..ng).map(|g| link.c(g, basepoint)).collect();
    let bijective = invert(&map, link.target.group().order()).is_some();
    QiMap {
        basepoint,
        map,
        bijective,
    }
}
