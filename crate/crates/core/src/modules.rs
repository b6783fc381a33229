//! Coefficient modules built from an action `G ↷ X`: the full module
//! `C(X, ℓ¹(G))`, its σ-kernel `N₀`, `W₀ = σ⁻¹(ℝ)`, and their duals.
//!
//! Basis conventions:
//! - full: `δ_x ⊗ δ_g` at index `x·|G| + g`;
//! - `N₀`: `δ_x ⊗ (δ_g − δ_e)` for `g ≠ e`, at index `x·(|G|−1) + k` where `k`
//!   counts the non-identity elements in order;
//! - `W₀`: the `N₀` basis followed by `c = Σ_x δ_x ⊗ δ_e`.
//!
//! Duals use the dual basis, with `g` acting by the transpose of `g⁻¹`.
//! Double duals are identified with the original module.

use std::fmt;
use std::sync::Arc;

use num::{Signed, Zero};
use thiserror::Error;

use crate::action::{Action, ClopenSet};
use crate::group::Group;
use crate::linalg::{solve_lp, LinearProgram, LpOutcome, RationalMatrix, Q};
use crate::report::Check;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Full,
    N0,
    W0,
    Dual(Box<ModuleKind>),
    Abstract,
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Full => f.write_str("full"),
            ModuleKind::N0 => f.write_str("N0"),
            ModuleKind::W0 => f.write_str("W0"),
            ModuleKind::Dual(inner) => write!(f, "{inner}*"),
            ModuleKind::Abstract => f.write_str("abstract"),
        }
    }
}

impl ModuleKind {
    /// The kind with every dual stripped, and whether an odd number was.
    fn base(&self) -> (&ModuleKind, bool) {
        match self {
            ModuleKind::Dual(inner) => {
                let (b, odd) = inner.base();
                (b, !odd)
            }
            other => (other, false),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("{op} is not defined on {kind} modules")]
    WrongKind { op: &'static str, kind: String },
    #[error("set lives in a space of size {got}, module space has size {expected}")]
    SpaceMismatch { expected: usize, got: usize },
    #[error(
        "restriction to this set leaves W0 (the constant summand is not restriction invariant)"
    )]
    NotRestrictionInvariant,
    #[error("resource limit: {what} = {size} exceeds cap {cap}")]
    ResourceLimit {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("coordinate vector has length {got}, module dimension is {expected}")]
    Dimension { expected: usize, got: usize },
}

/// A finite-dimensional rational representation of a finite group.
#[derive(Clone)]
pub struct GModule {
    group: Arc<Group>,
    kind: ModuleKind,
    labels: Vec<String>,
    action: Vec<RationalMatrix>,
    // present for modules built from an action
    space: Option<Arc<Action>>,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule({}, dim={})", self.kind, self.dim())
    }
}

impl GModule {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Matrix of `g` acting on coordinate columns.
    pub fn action(&self, g: usize) -> &RationalMatrix {
        &self.action[g]
    }

    pub fn action_space(&self) -> Option<&Arc<Action>> {
        self.space.as_ref()
    }

    /// Wraps explicit matrices as an abstract module. Use
    /// [`verify_representation`] to check the representation law.
    pub fn from_matrices(
        group: Arc<Group>,
        action: Vec<RationalMatrix>,
        labels: Option<Vec<String>>,
    ) -> Self {
        assert_eq!(action.len(), group.order(), "one matrix per group element");
        let dim = action.first().map_or(0, RationalMatrix::rows);
        assert!(
            action.iter().all(|m| m.shape() == (dim, dim)),
            "square matrices of equal size"
        );
        GModule {
            group,
            kind: ModuleKind::Abstract,
            labels: labels.unwrap_or_else(|| (0..dim).map(|i| format!("e{i}")).collect()),
            action,
            space: None,
        }
    }

    /// `dim`-dimensional module with every element acting as the identity.
    pub fn trivial(group: Arc<Group>, dim: usize) -> Self {
        let action = vec![RationalMatrix::identity(dim); group.order()];
        Self::from_matrices(group, action, None)
    }

    /// The point of `X` a basis coordinate is supported on; `None` for the
    /// constant summand of `W₀` and for abstract modules.
    pub fn point_of(&self, i: usize) -> Option<usize> {
        let n = self.group.order();
        match self.kind.base().0 {
            ModuleKind::Full => Some(i / n),
            ModuleKind::N0 => Some(i / (n - 1)),
            ModuleKind::W0 if i + 1 < self.dim() => Some(i / (n - 1)),
            _ => None,
        }
    }

    pub fn element(&self, coords: Vec<Q>) -> Result<ModuleElement<'_>, ModuleError> {
        if coords.len() != self.dim() {
            return Err(ModuleError::Dimension {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(ModuleElement {
            module: self,
            coords,
        })
    }

    pub fn basis_element(&self, i: usize) -> ModuleElement<'_> {
        let mut coords = vec![Q::zero(); self.dim()];
        coords[i] = Q::from_integer(1.into());
        ModuleElement {
            module: self,
            coords,
        }
    }

    /// Embedding into the full module `C(X, ℓ¹(G))` (identity for the full
    /// module itself).
    pub fn full_embedding(&self) -> Result<RationalMatrix, ModuleError> {
        let space = self.require_space("full_embedding")?;
        let n = self.group.order();
        let nx = space.size();
        let e = self.group.identity();
        let full_dim = nx * n;
        match &self.kind {
            ModuleKind::Full => Ok(RationalMatrix::identity(full_dim)),
            ModuleKind::N0 | ModuleKind::W0 => {
                let mut trips = Vec::new();
                for x in 0..nx {
                    for (k, g) in non_identity(&self.group).enumerate() {
                        let col = x * (n - 1) + k;
                        trips.push((x * n + g, col, one()));
                        trips.push((x * n + e, col, -one()));
                    }
                }
                if self.kind == ModuleKind::W0 {
                    let col = self.dim() - 1;
                    trips.extend((0..nx).map(|x| (x * n + e, col, one())));
                }
                Ok(RationalMatrix::from_triplets(full_dim, self.dim(), trips))
            }
            other => Err(ModuleError::WrongKind {
                op: "full_embedding",
                kind: other.to_string(),
            }),
        }
    }

    /// Left inverse of [`full_embedding`](Self::full_embedding) on its image.
    pub fn full_coordinates(&self) -> Result<RationalMatrix, ModuleError> {
        let space = self.require_space("full_coordinates")?;
        let n = self.group.order();
        let nx = space.size();
        let full_dim = nx * n;
        match &self.kind {
            ModuleKind::Full => Ok(RationalMatrix::identity(full_dim)),
            ModuleKind::N0 | ModuleKind::W0 => {
                let mut trips = Vec::new();
                for x in 0..nx {
                    for (k, g) in non_identity(&self.group).enumerate() {
                        trips.push((x * (n - 1) + k, x * n + g, one()));
                    }
                }
                if self.kind == ModuleKind::W0 {
                    // λ = σ(w)(x₀) for the first point
                    let row = self.dim() - 1;
                    trips.extend((0..n).map(|g| (row, g, one())));
                }
                Ok(RationalMatrix::from_triplets(self.dim(), full_dim, trips))
            }
            other => Err(ModuleError::WrongKind {
                op: "full_coordinates",
                kind: other.to_string(),
            }),
        }
    }

    fn require_space(&self, op: &'static str) -> Result<&Arc<Action>, ModuleError> {
        self.space.as_ref().ok_or_else(|| ModuleError::WrongKind {
            op,
            kind: self.kind.to_string(),
        })
    }

    fn check_set(&self, s: &ClopenSet) -> Result<(), ModuleError> {
        let space = self.require_space("restriction")?;
        if space.size() != s.space_size() {
            return Err(ModuleError::SpaceMismatch {
                expected: space.size(),
                got: s.space_size(),
            });
        }
        Ok(())
    }

    /// Matrix of `ξ ↦ ξ|_s` on this module, or of `τ ↦ τ|_s` on a dual.
    /// Both are the same coordinate projector because every basis vector
    /// other than the `W₀` constant is supported on a single point.
    pub fn restriction_matrix(&self, s: &ClopenSet) -> Result<RationalMatrix, ModuleError> {
        self.check_set(s)?;
        let (base, _) = self.kind.base();
        if *base == ModuleKind::W0 && !(s.is_empty() || s.is_full()) {
            return Err(ModuleError::NotRestrictionInvariant);
        }
        let trips = (0..self.dim()).filter_map(|i| {
            let keep = match self.point_of(i) {
                Some(x) => s.contains(x),
                None => s.is_full(),
            };
            keep.then(|| (i, i, one()))
        });
        Ok(RationalMatrix::from_triplets(self.dim(), self.dim(), trips))
    }
}

fn one() -> Q {
    Q::from_integer(1.into())
}

fn non_identity(group: &Group) -> impl Iterator<Item = usize> + '_ {
    let e = group.identity();
    group.elements().filter(move |&g| g != e)
}

fn point_labels(action: &Action) -> &[String] {
    action.space().labels()
}

pub fn build_full_module(action: &Arc<Action>) -> GModule {
    let group = action.group().clone();
    let n = group.order();
    let nx = action.size();
    let dim = nx * n;
    let matrices = group
        .elements()
        .map(|k| {
            let trips = (0..nx)
                .flat_map(|x| (0..n).map(move |g| (x, g)))
                .map(|(x, g)| (action.act(k, x) * n + group.mul(k, g), x * n + g, one()));
            RationalMatrix::from_triplets(dim, dim, trips)
        })
        .collect();
    let labels = (0..nx)
        .flat_map(|x| (0..n).map(move |g| (x, g)))
        .map(|(x, g)| format!("d[{}]@{}", point_labels(action)[x], group.label(g)))
        .collect();
    GModule {
        group,
        kind: ModuleKind::Full,
        labels,
        action: matrices,
        space: Some(action.clone()),
    }
}

/// Restricts the full action along `embed`/`coords`, i.e. `P·A_g·E`.
fn induced(
    full: &GModule,
    sub: &GModule,
    embed: &RationalMatrix,
    coords: &RationalMatrix,
) -> Vec<RationalMatrix> {
    full.group
        .elements()
        .map(|g| {
            let m = &(coords * &full.action[g]) * embed;
            debug_assert_eq!(m.shape(), (sub.dim(), sub.dim()));
            m
        })
        .collect()
}

fn sub_module(action: &Arc<Action>, kind: ModuleKind) -> GModule {
    let full = build_full_module(action);
    let group = action.group().clone();
    let e = group.identity();
    let mut labels: Vec<String> = (0..action.size())
        .flat_map(|x| non_identity(&group).map(move |g| (x, g)))
        .map(|(x, g)| {
            format!(
                "d[{}]@({}-{})",
                point_labels(action)[x],
                group.label(g),
                group.label(e)
            )
        })
        .collect();
    if kind == ModuleKind::W0 {
        labels.push(format!("const@{}", group.label(e)));
    }
    let mut module = GModule {
        group,
        kind,
        labels,
        action: Vec::new(),
        space: Some(action.clone()),
    };
    let embed = module.full_embedding().expect("built from an action");
    let coords = module.full_coordinates().expect("built from an action");
    module.action = induced(&full, &module, &embed, &coords);
    module
}

/// `N₀(G, X) = ker σ`, returned with its embedding into the full module.
pub fn build_n0(action: &Arc<Action>) -> (GModule, RationalMatrix) {
    let module = sub_module(action, ModuleKind::N0);
    let embed = module.full_embedding().expect("built from an action");
    (module, embed)
}

/// `W₀(G, X) = σ⁻¹(ℝ·1)`. The constant summand `c` is fixed by `G` only
/// modulo `N₀`: `g·c = Σ_x δ_x ⊗ δ_g`.
pub fn build_w0(action: &Arc<Action>) -> GModule {
    sub_module(action, ModuleKind::W0)
}

pub fn dualize(module: &GModule) -> GModule {
    let kind = match &module.kind {
        ModuleKind::Dual(inner) => (**inner).clone(),
        other => ModuleKind::Dual(Box::new(other.clone())),
    };
    let dualizing = matches!(kind, ModuleKind::Dual(_));
    let labels = module
        .labels
        .iter()
        .map(|l| match (dualizing, l.strip_prefix('*')) {
            (false, Some(rest)) => rest.to_string(),
            _ => format!("*{l}"),
        })
        .collect();
    let group = module.group.clone();
    let action = group
        .elements()
        .map(|g| module.action[group.inv(g)].transpose())
        .collect();
    GModule {
        group,
        kind,
        labels,
        action,
        space: module.space.clone(),
    }
}

/// Checks `A_e = I` and `A_g A_h = A_{gh}` exactly.
pub fn verify_representation(module: &GModule) -> Check {
    let g = &module.group;
    let name = format!("representation law ({})", module.kind);
    if !module.action[g.identity()].is_identity() {
        return Check::fail(name, 1, "identity does not act trivially");
    }
    let mut cases = 1;
    for a in g.elements() {
        for b in g.elements() {
            cases += 1;
            if &module.action[a] * &module.action[b] != module.action[g.mul(a, b)] {
                return Check::fail(name, cases, format!("(g, h) = ({a}, {b})"));
            }
        }
    }
    Check::pass(name, cases)
}

/// A vector in a module, in the module's basis.
#[derive(Clone, Debug)]
pub struct ModuleElement<'m> {
    module: &'m GModule,
    coords: Vec<Q>,
}

impl<'m> ModuleElement<'m> {
    pub fn module(&self) -> &'m GModule {
        self.module
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.coords
    }

    pub fn act(&self, g: usize) -> ModuleElement<'m> {
        ModuleElement {
            module: self.module,
            coords: self.module.action[g].mul_vec(&self.coords),
        }
    }

    fn to_full(&self, op: &'static str) -> Result<Vec<Q>, ModuleError> {
        match self.module.kind {
            ModuleKind::Full | ModuleKind::N0 | ModuleKind::W0 => {
                Ok(self.module.full_embedding()?.mul_vec(&self.coords))
            }
            _ => Err(ModuleError::WrongKind {
                op,
                kind: self.module.kind.to_string(),
            }),
        }
    }
}

/// `(σξ)(x) = Σ_g ξ_x(g)`; elements of `N₀` and `W₀` are embedded first.
pub fn sigma(elem: &ModuleElement<'_>) -> Result<Vec<Q>, ModuleError> {
    let full = elem.to_full("sigma")?;
    let n = elem.module.group.order();
    Ok(full
        .chunks(n)
        .map(|c| c.iter().fold(Q::zero(), |a, v| a + v))
        .collect())
}

/// `max_x Σ_g |ξ_x(g)|`.
pub fn sup_l1_norm(elem: &ModuleElement<'_>) -> Result<Q, ModuleError> {
    let full = elem.to_full("sup_l1_norm")?;
    let n = elem.module.group.order();
    Ok(full
        .chunks(n)
        .map(|c| c.iter().fold(Q::zero(), |a, v| a + v.abs()))
        .max()
        .unwrap_or_else(Q::zero))
}

pub fn restrict_element<'m>(
    elem: &ModuleElement<'m>,
    s: &ClopenSet,
) -> Result<ModuleElement<'m>, ModuleError> {
    match elem.module.kind {
        ModuleKind::Full | ModuleKind::N0 | ModuleKind::W0 => {}
        _ => {
            return Err(ModuleError::WrongKind {
                op: "restrict_element",
                kind: elem.module.kind.to_string(),
            })
        }
    }
    let r = elem.module.restriction_matrix(s)?;
    Ok(ModuleElement {
        module: elem.module,
        coords: r.mul_vec(&elem.coords),
    })
}

/// `τ|_s(ξ) = τ(ξ|_s)`.
pub fn restrict_functional<'m>(
    tau: &ModuleElement<'m>,
    s: &ClopenSet,
) -> Result<ModuleElement<'m>, ModuleError> {
    if !matches!(tau.module.kind, ModuleKind::Dual(_)) {
        return Err(ModuleError::WrongKind {
            op: "restrict_functional",
            kind: tau.module.kind.to_string(),
        });
    }
    let r = tau.module.restriction_matrix(s)?;
    Ok(ModuleElement {
        module: tau.module,
        coords: r.transpose().mul_vec(&tau.coords),
    })
}

/// Dual norm of a functional on `N₀` or on the full module, with respect
/// to the sup-ℓ¹ norm, by exact LP over `ξ = ξ⁺ − ξ⁻`.
pub fn dual_norm(tau: &ModuleElement<'_>, dim_cap: usize) -> Result<Q, ModuleError> {
    let module = tau.module;
    let base = match &module.kind {
        ModuleKind::Dual(inner) if matches!(**inner, ModuleKind::N0 | ModuleKind::Full) => {
            (**inner).clone()
        }
        other => {
            return Err(ModuleError::WrongKind {
                op: "dual_norm",
                kind: other.to_string(),
            })
        }
    };
    if module.dim() > dim_cap {
        return Err(ModuleError::ResourceLimit {
            what: "dual-norm module dimension",
            size: module.dim(),
            cap: dim_cap,
        });
    }
    if tau.coords.iter().all(Zero::is_zero) {
        return Ok(Q::zero());
    }
    let lp = dual_norm_program(module, &base, &tau.coords);
    match solve_lp(&lp) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => unreachable!("dual-norm LP is bounded and feasible, got {other:?}"),
    }
}

fn dual_norm_program(module: &GModule, base: &ModuleKind, tau: &[Q]) -> LinearProgram {
    let n = module.group.order();
    let nx = module.space.as_ref().expect("built from an action").size();
    let full_dim = nx * n;
    // τ as a functional on full coordinates restricted to the subspace
    let weights: Vec<Q> = match base {
        ModuleKind::Full => tau.to_vec(),
        _ => {
            let mut w = vec![Q::zero(); full_dim];
            for x in 0..nx {
                for (k, g) in non_identity(&module.group).enumerate() {
                    w[x * n + g] = tau[x * (n - 1) + k].clone();
                }
            }
            w
        }
    };
    // variables: p_0..p_{d-1}, m_0..m_{d-1}
    let mut objective = weights.clone();
    objective.extend(weights.iter().map(|w| -w));
    let mut lp = LinearProgram::new(objective);
    for x in 0..nx {
        let mut row = vec![Q::zero(); 2 * full_dim];
        for g in 0..n {
            row[x * n + g] = one();
            row[full_dim + x * n + g] = one();
        }
        lp.add_upper(row, one());
        if *base == ModuleKind::N0 {
            let mut row = vec![Q::zero(); 2 * full_dim];
            for g in 0..n {
                row[x * n + g] = one();
                row[full_dim + x * n + g] = -one();
            }
            lp.add_equal(row, Q::zero());
        }
    }
    lp
}
