//! Transfer matrices between the (co)homology of two orbit equivalent
//! actions, and the checks that they are isomorphisms of complexes.
//!
//! Directions: homology maps `S_n` go from the G-side complex
//! `C(Gⁿ, N₀(G,X)*)` to the H-side complex `C(Hⁿ, N₀(H,Y)*)` and `T_n` back;
//! cohomology maps `Sⁿ` go from `C(Hⁿ, N₀(H,Y)**)` to `C(Gⁿ, N₀(G,X)**)` and
//! `Tⁿ` back. Double duals are identified with `N₀` itself.
//!
//! Block structure (restriction projectors `R_A` are diagonal):
//! - `S_n[h-tuple, g-tuple] = π₀ᵀ · R_{[g;h]}`
//! - `T_n[g-tuple, h-tuple] = L₀ᵀ · R_{[h;g]}`
//! - `Sⁿ[g-tuple, h-tuple] = R_{[g;h]} · π₀`
//! - `Tⁿ[h-tuple, g-tuple] = R_{[h;g]} · L₀`
//!
//! where `π₀`, `L₀` are `π`, `L` restricted to `N₀` and `[g;h]` is the
//! tuple set `X_{g₀,h₀} ∩ g₀X_{g₁,h₁} ∩ …`.

use std::fmt;

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{orbits, ClopenSet};
use crate::bar::{
    build_chain_complex, build_cochain_complex, tuple_index, tuple_of, BarError, ChainComplexRep,
};
use crate::coe::{level_set, tuple_set, CoeLink, Side, VerifiedLink};
use crate::config::Config;
use crate::linalg::{column_spaces_equal, kernel_basis, RationalMatrix, Q};
use crate::modules::{
    build_full_module, build_n0, build_w0, dual_norm, dualize, restrict_functional, sup_l1_norm,
    GModule,
};
use crate::report::{Check, VerificationReport};

/// How target-side tuple blocks are laid out. `FlippedTarget` reverses the
/// tuple entries on the target side of `S_n` and `Sⁿ`; it exists as a
/// negative control and breaks the chain-map identities from degree 2 on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisOrder {
    #[default]
    Standard,
    Flipped,
}

#[derive(Clone, Debug)]
pub struct TransferOptions {
    pub max_degree: usize,
    pub basis_order: BasisOrder,
    pub seed: u64,
    pub random_vectors: usize,
    pub lp_samples: usize,
    pub config: Config,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions {
            max_degree: 3,
            basis_order: BasisOrder::Standard,
            seed: 0,
            random_vectors: 100,
            lp_samples: 50,
            config: Config::default(),
        }
    }
}

/// Coefficient family for the transfer maps. Only `N₀` is restriction
/// invariant; `W₀` is refused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    N0,
    W0,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransferError {
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error("transfer maps need restriction-invariant coefficients; W0 is not")]
    NotRestrictionInvariant,
    #[error("degree {degree} is outside the built range (max degree {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
}

/// The matrix of `π` on full modules with its structural certificates.
#[derive(Clone, Debug)]
pub struct PiMap {
    pub matrix: RationalMatrix,
    pub certificates: VerificationReport,
}

fn pi_matrix(link: &CoeLink) -> RationalMatrix {
    let (a, b) = (link.source(), link.target());
    let (ng, nh) = (a.group().order(), b.group().order());
    let gg = a.group();
    // (πξ)_x(g) = ξ_{φ(x)}(c(g, g⁻¹x))
    let trips = (0..a.size())
        .flat_map(|x| (0..ng).map(move |g| (x, g)))
        .map(|(x, g)| {
            let h = link.c(g, a.act(gg.inv(g), x));
            (x * ng + g, link.phi(x) * nh + h, Q::one())
        });
    RationalMatrix::from_triplets(a.size() * ng, b.size() * nh, trips)
}

fn l_matrix(link: &CoeLink) -> RationalMatrix {
    pi_matrix(&link.reversed())
}

pub fn build_l(link: &VerifiedLink) -> RationalMatrix {
    l_matrix(link)
}

pub fn build_pi(link: &VerifiedLink) -> PiMap {
    let pi = pi_matrix(link);
    let l = l_matrix(link);
    let mut report = VerificationReport::new("pi certificates");
    let n = pi.rows();
    report.push(Check::from_witness(
        "pi is a basis permutation",
        n as u64,
        (!pi.is_permutation()).then(|| "some row or column does not hold a single 1".to_string()),
    ));
    report.push(matrix_equality(
        "pi L = id",
        &(&pi * &l),
        &RationalMatrix::identity(n),
    ));
    report.push(matrix_equality(
        "L pi = id",
        &(&l * &pi),
        &RationalMatrix::identity(l.rows()),
    ));

    let (sx, sy) = (link.source(), link.target());
    let (n0x, ex) = build_n0(sx);
    let (n0y, ey) = build_n0(sy);
    let _ = (&n0x, &n0y);
    report.push(Check::from_witness(
        "pi(N0(H,Y)) = N0(G,X)",
        1,
        (!column_spaces_equal(&(&pi * &ey), &ex)).then(|| "column spaces differ".to_string()),
    ));
    let (w0x, w0y) = (build_w0(sx), build_w0(sy));
    let (wx, wy) = (
        w0x.full_embedding().expect("action module"),
        w0y.full_embedding().expect("action module"),
    );
    report.push(Check::from_witness(
        "pi(W0(H,Y)) = W0(G,X)",
        1,
        (!column_spaces_equal(&(&pi * &wy), &wx)).then(|| "column spaces differ".to_string()),
    ));
    let cy = column(&wy, wy.cols() - 1);
    let cx = column(&wx, wx.cols() - 1);
    report.push(Check::from_witness(
        "pi maps the constant summand onto the constant summand",
        1,
        (pi.mul_vec(&cy) != cx).then(|| "pi(c_Y) differs from c_X".to_string()),
    ));
    PiMap {
        matrix: pi,
        certificates: report,
    }
}

fn column(m: &RationalMatrix, c: usize) -> Vec<Q> {
    (0..m.rows()).map(|r| m.get(r, c)).collect()
}

fn matrix_equality(name: impl Into<String>, lhs: &RationalMatrix, rhs: &RationalMatrix) -> Check {
    let cases = (lhs.rows() * lhs.cols()) as u64;
    let witness = lhs.first_difference(rhs).map(|(r, c, a, b)| {
        if lhs.shape() != rhs.shape() {
            format!("shapes {:?} vs {:?}", lhs.shape(), rhs.shape())
        } else {
            format!("entry ({r}, {c}): {a} vs {b}")
        }
    });
    Check::from_witness(name, cases, witness)
}

/// Everything needed to assemble transfer matrices for one link.
#[derive(Clone, Debug)]
pub struct TransferRep {
    link: VerifiedLink,
    options: TransferOptions,
    n0_x: GModule,
    n0_y: GModule,
    pub pi: RationalMatrix,
    pub l: RationalMatrix,
    /// `π` restricted to `N₀`: `N₀(H,Y) → N₀(G,X)`.
    pub pi_n0: RationalMatrix,
    /// `L` restricted to `N₀`: `N₀(G,X) → N₀(H,Y)`.
    pub l_n0: RationalMatrix,
    pub s_hom: Vec<RationalMatrix>,
    pub t_hom: Vec<RationalMatrix>,
    pub s_coh: Vec<RationalMatrix>,
    pub t_coh: Vec<RationalMatrix>,
}

fn check_caps(link: &CoeLink, options: &TransferOptions) -> Result<(), TransferError> {
    let cfg = &options.config;
    if options.max_degree > cfg.degree_cap {
        return Err(BarError::DegreeCap {
            degree: options.max_degree,
            cap: cfg.degree_cap,
        }
        .into());
    }
    for side in [Side::G, Side::H] {
        let a = link.action(side);
        let n = a.group().order();
        let dim = n
            .checked_pow(options.max_degree as u32)
            .and_then(|p| p.checked_mul(a.size() * (n - 1)))
            .unwrap_or(usize::MAX);
        if dim > cfg.size_cap {
            return Err(BarError::SizeCap {
                degree: options.max_degree,
                dim,
                cap: cfg.size_cap,
            }
            .into());
        }
    }
    Ok(())
}

/// Which of the four families a block layout belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    SHom,
    THom,
    SCoh,
    TCoh,
}

impl TransferRep {
    pub fn build(link: &VerifiedLink, options: &TransferOptions) -> Result<Self, TransferError> {
        check_caps(link, options)?;
        let pi = pi_matrix(link);
        let l = l_matrix(link);
        let (n0_x, ex) = build_n0(link.source());
        let (n0_y, ey) = build_n0(link.target());
        let px = n0_x.full_coordinates().expect("action module");
        let py = n0_y.full_coordinates().expect("action module");
        let pi_n0 = &(&px * &pi) * &ey;
        let l_n0 = &(&py * &l) * &ex;
        let mut rep = TransferRep {
            link: link.clone(),
            options: options.clone(),
            n0_x,
            n0_y,
            pi,
            l,
            pi_n0,
            l_n0,
            s_hom: Vec::new(),
            t_hom: Vec::new(),
            s_coh: Vec::new(),
            t_coh: Vec::new(),
        };
        let degrees: Vec<(Family, usize)> =
            [Family::SHom, Family::THom, Family::SCoh, Family::TCoh]
                .into_iter()
                .flat_map(|f| (0..=options.max_degree).map(move |n| (f, n)))
                .collect();
        let built = options
            .config
            .exec
            .map(&degrees, |&(f, n)| rep.assemble(f, n));
        for ((f, _), m) in degrees.into_iter().zip(built) {
            match f {
                Family::SHom => rep.s_hom.push(m),
                Family::THom => rep.t_hom.push(m),
                Family::SCoh => rep.s_coh.push(m),
                Family::TCoh => rep.t_coh.push(m),
            }
        }
        Ok(rep)
    }

    pub fn link(&self) -> &VerifiedLink {
        &self.link
    }

    pub fn options(&self) -> &TransferOptions {
        &self.options
    }

    pub fn n0_source(&self) -> &GModule {
        &self.n0_x
    }

    pub fn n0_target(&self) -> &GModule {
        &self.n0_y
    }

    fn assemble(&self, family: Family, n: usize) -> RationalMatrix {
        let link = &*self.link;
        let (ng, nh) = (link.source().group().order(), link.target().group().order());
        let (dx, dy) = (self.n0_x.dim(), self.n0_y.dim());
        let flip = self.options.basis_order == BasisOrder::Flipped;
        // (matrix whose entries are copied, whose column/row point decides
        // membership, own group order, other group order, side of the set)
        let (base, rows_per, cols_per, own, other, side) = match family {
            Family::SHom => (self.pi_n0.transpose(), dy, dx, ng, nh, Side::G),
            Family::THom => (self.l_n0.transpose(), dx, dy, nh, ng, Side::H),
            Family::SCoh => (self.pi_n0.clone(), dx, dy, ng, nh, Side::G),
            Family::TCoh => (self.l_n0.clone(), dy, dx, nh, ng, Side::H),
        };
        let set_module = match side {
            Side::G => &self.n0_x,
            Side::H => &self.n0_y,
        };
        // homology blocks restrict on the right (columns), cohomology on the left
        let restrict_columns = matches!(family, Family::SHom | Family::THom);
        let own_count = own.pow(n as u32);
        let other_count = other.pow(n as u32);
        let blocks = self.options.config.exec.map_range(own_count, |oi| {
            let own_t = tuple_of(oi, own, n);
            let mut trips = Vec::new();
            for ti in 0..other_count {
                let other_t = tuple_of(ti, other, n);
                let set = tuple_set(link, side, &own_t, &other_t).expect("equal lengths");
                if set.is_empty() {
                    continue;
                }
                // block position: homology S/T put the other tuple on rows,
                // cohomology S/T put the own tuple on rows
                let (mut row_t, col_i) = if restrict_columns {
                    (other_t.clone(), oi)
                } else {
                    (own_t.clone(), ti)
                };
                let row_base = if restrict_columns { other } else { own };
                let is_s = matches!(family, Family::SHom | Family::SCoh);
                if flip && is_s {
                    row_t.reverse();
                }
                let row_i = tuple_index(&row_t, row_base);
                for (r, c, v) in base.triplets() {
                    let idx = if restrict_columns { c } else { r };
                    let keep = set_module.point_of(idx).is_some_and(|x| set.contains(x));
                    if keep {
                        trips.push((row_i * rows_per + r, col_i * cols_per + c, v.clone()));
                    }
                }
            }
            trips
        });
        let (row_count, col_count) = if restrict_columns {
            (other_count * rows_per, own_count * cols_per)
        } else {
            (own_count * rows_per, other_count * cols_per)
        };
        RationalMatrix::from_triplets(row_count, col_count, blocks.into_iter().flatten())
    }

    fn degree(&self, n: usize) -> Result<usize, TransferError> {
        if n > self.options.max_degree {
            return Err(TransferError::DegreeOutOfRange {
                degree: n,
                max: self.options.max_degree,
            });
        }
        Ok(n)
    }

    pub fn s_homology(&self, n: usize) -> Result<&RationalMatrix, TransferError> {
        Ok(&self.s_hom[self.degree(n)?])
    }

    pub fn t_homology(&self, n: usize) -> Result<&RationalMatrix, TransferError> {
        Ok(&self.t_hom[self.degree(n)?])
    }

    pub fn s_cohomology(&self, n: usize) -> Result<&RationalMatrix, TransferError> {
        Ok(&self.s_coh[self.degree(n)?])
    }

    pub fn t_cohomology(&self, n: usize) -> Result<&RationalMatrix, TransferError> {
        Ok(&self.t_coh[self.degree(n)?])
    }
}

fn single_degree(
    link: &VerifiedLink,
    n: usize,
    coefficients: Coefficients,
    options: &TransferOptions,
    family: Family,
) -> Result<RationalMatrix, TransferError> {
    if coefficients == Coefficients::W0 {
        return Err(TransferError::NotRestrictionInvariant);
    }
    let opts = TransferOptions {
        max_degree: 0,
        ..options.clone()
    };
    if n > options.config.degree_cap {
        return Err(BarError::DegreeCap {
            degree: n,
            cap: options.config.degree_cap,
        }
        .into());
    }
    check_caps(
        link,
        &TransferOptions {
            max_degree: n,
            ..options.clone()
        },
    )?;
    let rep = TransferRep::build(link, &opts)?;
    Ok(rep.assemble(family, n))
}

/// `S_n : C(Gⁿ, N₀(G,X)*) → C(Hⁿ, N₀(H,Y)*)`.
pub fn build_s_homology(
    link: &VerifiedLink,
    n: usize,
    coefficients: Coefficients,
    options: &TransferOptions,
) -> Result<RationalMatrix, TransferError> {
    single_degree(link, n, coefficients, options, Family::SHom)
}

/// `T_n : C(Hⁿ, N₀(H,Y)*) → C(Gⁿ, N₀(G,X)*)`.
pub fn build_t_homology(
    link: &VerifiedLink,
    n: usize,
    coefficients: Coefficients,
    options: &TransferOptions,
) -> Result<RationalMatrix, TransferError> {
    single_degree(link, n, coefficients, options, Family::THom)
}

/// `Sⁿ : C(Hⁿ, N₀(H,Y)**) → C(Gⁿ, N₀(G,X)**)`.
pub fn build_s_cohomology(
    link: &VerifiedLink,
    n: usize,
    coefficients: Coefficients,
    options: &TransferOptions,
) -> Result<RationalMatrix, TransferError> {
    single_degree(link, n, coefficients, options, Family::SCoh)
}

/// `Tⁿ : C(Gⁿ, N₀(G,X)**) → C(Hⁿ, N₀(H,Y)**)`.
pub fn build_t_cohomology(
    link: &VerifiedLink,
    n: usize,
    coefficients: Coefficients,
    options: &TransferOptions,
) -> Result<RationalMatrix, TransferError> {
    single_degree(link, n, coefficients, options, Family::TCoh)
}

fn diagonal(module: &GModule, set: &ClopenSet) -> RationalMatrix {
    module
        .restriction_matrix(set)
        .expect("N0 restriction is always defined")
}

/// Local equivariance of `π` on level sets, and how `π`, `L` compose with
/// restrictions.
pub fn verify_local_equivariance(link: &VerifiedLink) -> VerificationReport {
    let rep = TransferRep::build(
        link,
        &TransferOptions {
            max_degree: 0,
            ..TransferOptions::default()
        },
    )
    .expect("degree 0 is always within caps");
    local_equivariance(&rep)
}

fn local_equivariance(rep: &TransferRep) -> VerificationReport {
    let link = &*rep.link;
    let (a, b) = (link.source(), link.target());
    let (gg, hh) = (a.group(), b.group());
    let (nx, ny) = (&rep.n0_x, &rep.n0_y);
    let mut report = VerificationReport::new("local equivariance");

    let mut cases = 0u64;
    let mut witness = None;
    'outer: for g in gg.elements() {
        for h in hh.elements() {
            let x0 = level_set(link, Side::G, g, h);
            if x0.is_empty() {
                continue;
            }
            let subsets = std::iter::once(x0.clone())
                .chain(x0.points().map(|x| ClopenSet::singleton(a.size(), x)));
            for s in subsets {
                cases += 1;
                let r = diagonal(nx, &s);
                let r_back = diagonal(nx, &a.translate(gg.inv(g), &s));
                let lhs = &(&r * &rep.pi_n0) * ny.action(h);
                let mid = &(&r * nx.action(g)) * &rep.pi_n0;
                let rhs = &(nx.action(g) * &r_back) * &rep.pi_n0;
                let diff = lhs
                    .first_difference(&mid)
                    .or_else(|| mid.first_difference(&rhs));
                if let Some((_, col, _, _)) = diff {
                    witness = Some(format!(
                        "(g, h) = ({g}, {h}), set {s:?}, basis vector {col}"
                    ));
                    break 'outer;
                }
            }
        }
    }
    report.push(Check::from_witness(
        "pi(h xi)|X0 = (g pi(xi))|X0 = g(pi(xi)|g^-1 X0)",
        cases,
        witness,
    ));

    let fx = clopen_family(link, Side::G);
    let fy = clopen_family(link, Side::H);
    let mut cases = 0u64;
    let mut w1 = None;
    let mut w2 = None;
    for s in &fx {
        for t in &fy {
            cases += 1;
            let (rs, rt) = (diagonal(nx, s), diagonal(ny, t));
            if w1.is_none() {
                let lhs = &(&(&rs * &rep.pi_n0) * &rt) * &rep.l_n0;
                let meet = s.intersect(&t.image(|y| link.psi(y)));
                if let Some((_, col, _, _)) = lhs.first_difference(&diagonal(nx, &meet)) {
                    w1 = Some(format!("X0 {s:?}, Y0 {t:?}, basis vector {col}"));
                }
            }
            if w2.is_none() {
                let lhs = &(&(&rt * &rep.l_n0) * &rs) * &rep.pi_n0;
                let meet = t.intersect(&s.image(|x| link.phi(x)));
                if let Some((_, col, _, _)) = lhs.first_difference(&diagonal(ny, &meet)) {
                    w2 = Some(format!("X0 {s:?}, Y0 {t:?}, basis vector {col}"));
                }
            }
        }
    }
    report.push(Check::from_witness(
        "pi(L(eta)|Y0)|X0 = eta|(X0 ∩ psi(Y0))",
        cases,
        w1,
    ));
    report.push(Check::from_witness(
        "L(pi(xi)|X0)|Y0 = xi|(Y0 ∩ phi(X0))",
        cases,
        w2,
    ));
    report
}

/// The clopen sets the restriction identities are tested on: the empty set,
/// the whole space, orbits, level sets and singletons, without duplicates.
pub fn clopen_family(link: &CoeLink, side: Side) -> Vec<ClopenSet> {
    let a = link.action(side);
    let size = a.size();
    let (own, other) = match side {
        Side::G => (link.source().group().order(), link.target().group().order()),
        Side::H => (link.target().group().order(), link.source().group().order()),
    };
    let mut sets = vec![ClopenSet::empty(size), ClopenSet::full(size)];
    sets.extend(orbits(a));
    for g in 0..own {
        for h in 0..other {
            sets.push(match side {
                Side::G => level_set(link, Side::G, g, h),
                Side::H => level_set(link, Side::H, h, g),
            });
        }
    }
    sets.extend((0..size).map(|x| ClopenSet::singleton(size, x)));
    let mut seen = std::collections::BTreeSet::new();
    sets.retain(|s| seen.insert(s.clone()));
    sets
}

/// One row of a (co)homology dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimRow {
    pub side: Side,
    pub coefficients: String,
    pub orientation: crate::bar::Orientation,
    pub degree: usize,
    pub dim: usize,
}

/// Outcome of the dual-norm sweep over restricted functionals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NormSweep {
    pub samples: usize,
    pub comparisons: usize,
    /// Comparisons where the sum of restricted norms equals the norm.
    /// Exploratory; equality is not asserted.
    pub tight: usize,
    pub skipped_over_cap: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub verification: VerificationReport,
    pub dims: Vec<DimRow>,
    pub norm_sweep: NormSweep,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.verification.passed()
    }
}

struct Complexes {
    chain_g: ChainComplexRep,
    chain_h: ChainComplexRep,
    cochain_g: ChainComplexRep,
    cochain_h: ChainComplexRep,
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    let num: i64 = rng.gen_range(-6..=6);
    let den: i64 = rng.gen_range(1..=5);
    Q::new(num.into(), den.into())
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Q> {
    (0..len).map(|_| random_rational(rng)).collect()
}

/// Builds every transfer matrix and checks all identities up to
/// `options.max_degree`.
pub fn verify_transfer(
    link: &VerifiedLink,
    options: &TransferOptions,
) -> Result<TransferReport, TransferError> {
    let rep = TransferRep::build(link, options)?;
    Ok(verify_rep(&rep))
}

pub fn verify_rep(rep: &TransferRep) -> TransferReport {
    let options = &rep.options;
    let cfg = &options.config;
    let max = options.max_degree;
    let link = &*rep.link;
    let mut report = VerificationReport::new("transfer");

    let pi_map = build_pi(&rep.link);
    report.extend(pi_map.certificates);
    report.push(isometry_check(rep, options.seed, options.random_vectors));
    report.extend(local_equivariance(rep));

    let cx = build_complexes(rep, max, cfg).expect("caps checked when building transfer maps");

    // chain maps
    let mut chain_s = Vec::new();
    let mut chain_t = Vec::new();
    for n in 1..=max {
        let (dg, dh) = (
            cx.chain_g.boundary(n).unwrap(),
            cx.chain_h.boundary(n).unwrap(),
        );
        chain_s.push(matrix_equality(
            format!("d_{n} S_{n} = S_{} d_{n}", n - 1),
            &(dh * &rep.s_hom[n]),
            &(&rep.s_hom[n - 1] * dg),
        ));
        chain_t.push(matrix_equality(
            format!("d_{n} T_{n} = T_{} d_{n}", n - 1),
            &(dg * &rep.t_hom[n]),
            &(&rep.t_hom[n - 1] * dh),
        ));
    }
    report.push(all_of("homology chain map S", chain_s));
    report.push(all_of("homology chain map T", chain_t));

    let mut co_s = Vec::new();
    let mut co_t = Vec::new();
    for n in 0..max {
        let (dg, dh) = (
            cx.cochain_g.boundary(n).unwrap(),
            cx.cochain_h.boundary(n).unwrap(),
        );
        co_s.push(matrix_equality(
            format!("d^{n} S^{n} = S^{} d^{n}", n + 1),
            &(dg * &rep.s_coh[n]),
            &(&rep.s_coh[n + 1] * dh),
        ));
        co_t.push(matrix_equality(
            format!("d^{n} T^{n} = T^{} d^{n}", n + 1),
            &(dh * &rep.t_coh[n]),
            &(&rep.t_coh[n + 1] * dg),
        ));
    }
    report.push(all_of("cohomology cochain map S", co_s));
    report.push(all_of("cohomology cochain map T", co_t));

    let inverse_checks = |s: &[RationalMatrix], t: &[RationalMatrix], sym: &str| {
        let mut ts = Vec::new();
        let mut st = Vec::new();
        for n in 0..=max {
            let ident = |m: &RationalMatrix| RationalMatrix::identity(m.cols());
            ts.push(matrix_equality(
                format!("T{sym}{n} S{sym}{n} = id"),
                &(&t[n] * &s[n]),
                &ident(&s[n]),
            ));
            st.push(matrix_equality(
                format!("S{sym}{n} T{sym}{n} = id"),
                &(&s[n] * &t[n]),
                &ident(&t[n]),
            ));
        }
        (ts, st)
    };
    let (ts, st) = inverse_checks(&rep.s_hom, &rep.t_hom, "_");
    report.push(all_of("homology T S = id", ts));
    report.push(all_of("homology S T = id", st));
    let (ts, st) = inverse_checks(&rep.s_coh, &rep.t_coh, "^");
    report.push(all_of("cohomology T S = id", ts));
    report.push(all_of("cohomology S T = id", st));

    report.extend(induced_maps(rep, &cx));

    let mut dims = Vec::new();
    for (side, chain, cochain) in [
        (Side::G, &cx.chain_g, &cx.cochain_g),
        (Side::H, &cx.chain_h, &cx.cochain_h),
    ] {
        for (n, d) in chain.homology_dims().into_iter().enumerate() {
            dims.push(DimRow {
                side,
                coefficients: "N0*".into(),
                orientation: crate::bar::Orientation::Chain,
                degree: n,
                dim: d,
            });
        }
        for (n, d) in cochain.homology_dims().into_iter().enumerate() {
            dims.push(DimRow {
                side,
                coefficients: "N0**".into(),
                orientation: crate::bar::Orientation::Cochain,
                degree: n,
                dim: d,
            });
        }
    }
    let (uf_check, uf_rows) = uniformly_finite_check(rep, &cx, cfg);
    report.push(uf_check);
    dims.extend(uf_rows);

    let (norm_check, norm_sweep) = norm_sweep(rep, options);
    report.push(norm_check);

    let mut notes = vec![
        "positive-degree homology and cohomology vanish for finite groups with rational coefficients; \
         the discriminating content is the exact matrix identities"
            .to_string(),
        "double duals N0** are identified with N0 (finite dimension)".to_string(),
    ];
    if rep.link.is_assumed() {
        notes.push("link was not verified before building transfer maps".to_string());
    }
    if options.basis_order == BasisOrder::Flipped {
        notes.push("target-side tuple order flipped (negative control)".to_string());
    }
    let _ = link;
    TransferReport {
        verification: report,
        dims,
        norm_sweep,
        seed: options.seed,
        notes,
    }
}

fn all_of(name: &str, checks: Vec<Check>) -> Check {
    let cases = checks.iter().map(|c| c.cases).sum();
    match checks.into_iter().find(|c| !c.passed) {
        None => Check::pass(name, cases),
        Some(c) => Check::fail(
            name,
            cases,
            format!("{}: {}", c.name, c.witness.unwrap_or_default()),
        ),
    }
}

fn build_complexes(rep: &TransferRep, max: usize, cfg: &Config) -> Result<Complexes, BarError> {
    let (dx, dy) = (dualize(&rep.n0_x), dualize(&rep.n0_y));
    // N0** is N0 itself
    let (bx, by) = (dualize(&dx), dualize(&dy));
    Ok(Complexes {
        chain_g: build_chain_complex(&dx, max, cfg)?,
        chain_h: build_chain_complex(&dy, max, cfg)?,
        cochain_g: build_cochain_complex(&bx, max, cfg)?,
        cochain_h: build_cochain_complex(&by, max, cfg)?,
    })
}

fn isometry_check(rep: &TransferRep, seed: u64, samples: usize) -> Check {
    let link = &*rep.link;
    let (fx, fy) = (
        build_full_module(link.source()),
        build_full_module(link.target()),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<Vec<Q>> = (0..fy.dim())
        .map(|i| fy.basis_element(i).into_coords())
        .chain((0..samples).map(|_| random_vector(&mut rng, fy.dim())))
        .collect();
    let cases = vectors.len() as u64;
    let witness = vectors.iter().enumerate().find_map(|(i, v)| {
        let before = sup_l1_norm(&fy.element(v.clone()).ok()?).ok()?;
        let after = sup_l1_norm(&fx.element(rep.pi.mul_vec(v)).ok()?).ok()?;
        (before != after).then(|| format!("vector {i}: norm {before} becomes {after}"))
    });
    Check::from_witness("pi preserves the sup-l1 norm", cases, witness)
}

fn induced_maps(rep: &TransferRep, cx: &Complexes) -> VerificationReport {
    let max = rep.options.max_degree;
    let mut report = VerificationReport::new("");
    let mut kernels = Vec::new();
    let mut images = Vec::new();
    let mut dims = Vec::new();
    for n in 0..max {
        // chain side: S_n maps ker ∂_n into ker ∂_n and im ∂_{n+1} onto im ∂_{n+1}
        if n >= 1 {
            let (dg, dh) = (
                cx.chain_g.boundary(n).unwrap(),
                cx.chain_h.boundary(n).unwrap(),
            );
            let k = kernel_basis(dg);
            let kmat = RationalMatrix::from_columns(dg.cols(), &k);
            let img = &(dh * &rep.s_hom[n]) * &kmat;
            kernels.push(Check::from_witness(
                format!("S_{n} maps cycles to cycles"),
                k.len() as u64,
                (!img.is_zero()).then(|| "a cycle maps to a non-cycle".to_string()),
            ));
        }
        let (ug, uh) = (
            cx.chain_g.boundary(n + 1).unwrap(),
            cx.chain_h.boundary(n + 1).unwrap(),
        );
        images.push(Check::from_witness(
            format!("S_{n} maps boundaries onto boundaries"),
            1,
            (!column_spaces_equal(&(&rep.s_hom[n] * ug), uh))
                .then(|| "image spaces differ".to_string()),
        ));
        let (a, b) = (
            cx.chain_g.homology_dim(n).unwrap(),
            cx.chain_h.homology_dim(n).unwrap(),
        );
        dims.push(Check::from_witness(
            format!("dim H_{n}(G, N0*) = dim H_{n}(H, N0*)"),
            1,
            (a != b).then(|| format!("{a} vs {b}")),
        ));

        // cochain side: Sⁿ maps ker ∂ⁿ_H into ker ∂ⁿ_G and im ∂^{n-1}_H onto im ∂^{n-1}_G
        let (dg, dh) = (
            cx.cochain_g.boundary(n).unwrap(),
            cx.cochain_h.boundary(n).unwrap(),
        );
        let k = kernel_basis(dh);
        let kmat = RationalMatrix::from_columns(dh.cols(), &k);
        let img = &(dg * &rep.s_coh[n]) * &kmat;
        kernels.push(Check::from_witness(
            format!("S^{n} maps cocycles to cocycles"),
            k.len() as u64,
            (!img.is_zero()).then(|| "a cocycle maps to a non-cocycle".to_string()),
        ));
        if n >= 1 {
            let (lg, lh) = (
                cx.cochain_g.boundary(n - 1).unwrap(),
                cx.cochain_h.boundary(n - 1).unwrap(),
            );
            images.push(Check::from_witness(
                format!("S^{n} maps coboundaries onto coboundaries"),
                1,
                (!column_spaces_equal(&(&rep.s_coh[n] * lh), lg))
                    .then(|| "image spaces differ".to_string()),
            ));
        }
        let (a, b) = (
            cx.cochain_g.homology_dim(n).unwrap(),
            cx.cochain_h.homology_dim(n).unwrap(),
        );
        dims.push(Check::from_witness(
            format!("dim H^{n}(G, N0**) = dim H^{n}(H, N0**)"),
            1,
            (a != b).then(|| format!("{a} vs {b}")),
        ));
    }
    report.push(all_of("induced maps preserve kernels", kernels));
    report.push(all_of("induced maps preserve images", images));
    report.push(all_of("induced dimensions agree", dims));
    report
}

fn uniformly_finite_check(rep: &TransferRep, cx: &Complexes, cfg: &Config) -> (Check, Vec<DimRow>) {
    let link = &*rep.link;
    let mut rows = Vec::new();
    let mut witness = None;
    for (side, chain) in [(Side::G, &cx.chain_g), (Side::H, &cx.chain_h)] {
        let w0 = dualize(&build_w0(link.action(side)));
        let complex = match build_chain_complex(&w0, 1, cfg) {
            Ok(c) => c,
            Err(e) => {
                witness.get_or_insert(format!("{side} side: {e}"));
                continue;
            }
        };
        let w = complex.homology_dim(0).unwrap();
        let n = if chain.max_degree() >= 1 {
            chain.homology_dim(0).unwrap()
        } else {
            w.saturating_sub(1)
        };
        rows.push(DimRow {
            side,
            coefficients: "W0*".into(),
            orientation: crate::bar::Orientation::Chain,
            degree: 0,
            dim: w,
        });
        if w != n + 1 && witness.is_none() {
            witness = Some(format!("{side} side: dim H0(W0*) = {w}, dim H0(N0*) = {n}"));
        }
    }
    (
        Check::from_witness("dim H0(W0*) = 1 + dim H0(N0*)", 2, witness),
        rows,
    )
}

/// Partitions used by the dual-norm sweep: level sets of the first
/// non-identity element, orbits, and singletons.
fn sweep_partitions(link: &CoeLink, side: Side) -> Vec<Vec<ClopenSet>> {
    let a = link.action(side);
    let own = a.group();
    let other = link.action(match side {
        Side::G => Side::H,
        Side::H => Side::G,
    });
    let g = own
        .elements()
        .find(|&g| g != own.identity())
        .unwrap_or(own.identity());
    let level: Vec<ClopenSet> = other
        .group()
        .elements()
        .map(|h| match side {
            Side::G => level_set(link, Side::G, g, h),
            Side::H => level_set(link, Side::H, h, g),
        })
        .filter(|s| !s.is_empty())
        .collect();
    let singles = (0..a.size())
        .map(|x| ClopenSet::singleton(a.size(), x))
        .collect();
    vec![level, orbits(a), singles]
}

fn norm_sweep(rep: &TransferRep, options: &TransferOptions) -> (Check, NormSweep) {
    let link = &*rep.link;
    let cap = options.config.dual_norm_dim_cap;
    let mut sweep = NormSweep {
        samples: options.lp_samples,
        ..NormSweep::default()
    };
    let name = "sum of restricted dual norms <= dual norm";
    let mut jobs = Vec::new();
    for (side, module) in [(Side::G, &rep.n0_x), (Side::H, &rep.n0_y)] {
        if module.dim() > cap {
            sweep.skipped_over_cap = true;
            continue;
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(options.seed ^ if side == Side::G { 0x5eed } else { 0xfeed });
        for _ in 0..options.lp_samples {
            jobs.push((side, random_vector(&mut rng, module.dim())));
        }
    }
    let partitions = [
        (Side::G, sweep_partitions(link, Side::G)),
        (Side::H, sweep_partitions(link, Side::H)),
    ];
    let results = options.config.exec.map(&jobs, |(side, coords)| {
        let module = dualize(match side {
            Side::G => &rep.n0_x,
            Side::H => &rep.n0_y,
        });
        let tau = module.element(coords.clone()).expect("dimension matches");
        let total = dual_norm(&tau, cap).expect("under cap");
        let parts = &partitions
            .iter()
            .find(|(s, _)| s == side)
            .expect("both sides")
            .1;
        parts
            .iter()
            .map(|partition| {
                let sum = partition.iter().fold(Q::zero(), |acc, s| {
                    let r = restrict_functional(&tau, s).expect("N0 restriction");
                    acc + dual_norm(&r, cap).expect("under cap")
                });
                (
                    sum.clone() <= total,
                    sum == total,
                    format!("{side} side: sum {sum} vs norm {total}"),
                )
            })
            .collect::<Vec<_>>()
    });
    let mut witness = None;
    for (ok, tight, msg) in results.into_iter().flatten() {
        sweep.comparisons += 1;
        if tight {
            sweep.tight += 1;
        }
        if !ok && witness.is_none() {
            witness = Some(msg);
        }
    }
    let check = Check::from_witness(name, sweep.comparisons as u64, witness);
    (check, sweep)
}

impl fmt::Display for TransferReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.verification.checks {
            writeln!(f, "{} {}", if c.passed { "pass" } else { "FAIL" }, c.name)?;
        }
        Ok(())
    }
}
