//! Bar-resolution chain and cochain complexes with exact boundary matrices.
//!
//! `C_n = C(Gⁿ, V)` has basis `(g_1, …, g_n, i)` indexed by
//! `tuple_index(g) · dim V + i`, where `tuple_index` reads the tuple as a
//! base-`|G|` numeral with `g_1` most significant.
//!
//! Chain boundary, `∂_n : C_n → C_{n−1}`:
//! `∂_n f(g_1…g_{n−1}) = Σ_{g_0} g_0⁻¹ f(g_0, g_1…)
//!   + Σ_{i=1}^{n−1} (−1)^i Σ_{g ḡ = g_i} f(…, g, ḡ, …)
//!   + (−1)^n Σ_{g_n} f(g_1…g_{n−1}, g_n)`.
//!
//! Cochain coboundary, `∂ⁿ : Cⁿ → C^{n+1}`:
//! `∂ⁿ f(g_0…g_n) = g_0 f(g_1…g_n) + Σ_{i=1}^{n} (−1)^i f(…, g_{i−1}g_i, …)
//!   + (−1)^{n+1} f(g_0…g_{n−1})`.

use std::sync::{Arc, OnceLock};

use num::One;
use serde::Serialize;
use thiserror::Error;

use crate::config::Config;
use crate::group::Group;
use crate::linalg::{rank, RationalMatrix, Q};
use crate::modules::GModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Chain,
    Cochain,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BarError {
    #[error("resource limit: degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("resource limit: C_{degree} has dimension {dim}, above the size cap {cap}")]
    SizeCap {
        degree: usize,
        dim: usize,
        cap: usize,
    },
    #[error("degree {degree} is outside the computed range (max degree {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
}

/// Decodes a tuple index into its entries, most significant first.
pub fn tuple_of(index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    let mut idx = index;
    for slot in t.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    t
}

pub fn tuple_index(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * base + g)
}

#[derive(Debug)]
pub struct ChainComplexRep {
    group: Arc<Group>,
    coefficients: GModule,
    orientation: Orientation,
    max_degree: usize,
    // chain: boundaries[k] = ∂_{k+1}; cochain: boundaries[k] = ∂^k
    boundaries: Vec<RationalMatrix>,
    ranks: OnceLock<Vec<usize>>,
    config: Config,
}

impl ChainComplexRep {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn coefficients(&self) -> &GModule {
        &self.coefficients
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self, n: usize) -> usize {
        self.group.order().pow(n as u32) * self.coefficients.dim()
    }

    /// Chain: `∂_n` for `1 ≤ n ≤ max_degree`. Cochain: `∂ⁿ` for
    /// `0 ≤ n < max_degree`.
    pub fn boundary(&self, n: usize) -> Option<&RationalMatrix> {
        match self.orientation {
            Orientation::Chain => n.checked_sub(1).and_then(|k| self.boundaries.get(k)),
            Orientation::Cochain => self.boundaries.get(n),
        }
    }

    pub fn boundaries(&self) -> &[RationalMatrix] {
        &self.boundaries
    }

    /// Replaces the boundary of degree `n`, indexed as in [`Self::boundary`].
    /// Intended for corrupted fixtures.
    pub fn set_boundary(&mut self, n: usize, m: RationalMatrix) {
        let k = match self.orientation {
            Orientation::Chain => n - 1,
            Orientation::Cochain => n,
        };
        assert_eq!(m.shape(), self.boundaries[k].shape());
        self.boundaries[k] = m;
        self.ranks = OnceLock::new();
    }

    /// Ranks of the stored boundaries, computed once (in parallel when the
    /// configured execution mode allows).
    pub fn ranks(&self) -> &[usize] {
        self.ranks
            .get_or_init(|| self.config.exec.map(&self.boundaries, rank))
    }

    fn rank_of(&self, n: usize) -> usize {
        let k = match self.orientation {
            Orientation::Chain => n.checked_sub(1),
            Orientation::Cochain => Some(n),
        };
        k.and_then(|k| self.ranks().get(k).copied()).unwrap_or(0)
    }

    /// `dim H_n` (chain) or `dim Hⁿ` (cochain) for `n < max_degree`.
    pub fn homology_dim(&self, n: usize) -> Result<usize, BarError> {
        if n >= self.max_degree {
            return Err(BarError::DegreeOutOfRange {
                degree: n,
                max: self.max_degree,
            });
        }
        let dim = self.dim(n);
        Ok(match self.orientation {
            // ker ∂_n has dim C_n − rank ∂_n, image from ∂_{n+1}
            Orientation::Chain => dim - self.rank_of(n) - self.rank_of(n + 1),
            // ker ∂ⁿ has dim Cⁿ − rank ∂ⁿ, image from ∂^{n−1}
            Orientation::Cochain => {
                let below = if n == 0 { 0 } else { self.rank_of(n - 1) };
                dim - self.rank_of(n) - below
            }
        })
    }

    /// All computable (co)homology dimensions, degrees `0..max_degree`.
    pub fn homology_dims(&self) -> Vec<usize> {
        (0..self.max_degree)
            .map(|n| self.homology_dim(n).expect("in range"))
            .collect()
    }
}

fn check_caps(
    group: &Group,
    v: &GModule,
    max_degree: usize,
    config: &Config,
) -> Result<(), BarError> {
    if max_degree > config.degree_cap {
        return Err(BarError::DegreeCap {
            degree: max_degree,
            cap: config.degree_cap,
        });
    }
    let dim = group
        .order()
        .checked_pow(max_degree as u32)
        .and_then(|p| p.checked_mul(v.dim()))
        .unwrap_or(usize::MAX);
    if dim > config.size_cap {
        return Err(BarError::SizeCap {
            degree: max_degree,
            dim,
            cap: config.size_cap,
        });
    }
    Ok(())
}

/// Matrix of `∂_n` for `n ≥ 1`.
pub fn chain_boundary(group: &Group, v: &GModule, n: usize) -> RationalMatrix {
    assert!(n >= 1);
    let order = group.order();
    let d = v.dim();
    let (rows, cols) = (order.pow(n as u32 - 1) * d, order.pow(n as u32) * d);
    let mut trips: Vec<(usize, usize, Q)> = Vec::new();
    for t in 0..order.pow(n as u32) {
        let k = tuple_of(t, order, n);
        // face 0: g_0⁻¹ acting, drop the first entry
        let rest = tuple_index(&k[1..], order) * d;
        for (r, j, a) in v.action(group.inv(k[0])).triplets() {
            trips.push((rest + r, t * d + j, a.clone()));
        }
        // inner faces: merge positions i, i+1 (1-based)
        for i in 1..n {
            let mut merged = k[..i - 1].to_vec();
            merged.push(group.mul(k[i - 1], k[i]));
            merged.extend_from_slice(&k[i + 1..]);
            let base = tuple_index(&merged, order) * d;
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            for j in 0..d {
                trips.push((base + j, t * d + j, sign.clone()));
            }
        }
        // last face: drop the final entry
        let base = tuple_index(&k[..n - 1], order) * d;
        let sign = if n.is_multiple_of(2) {
            Q::one()
        } else {
            -Q::one()
        };
        for j in 0..d {
            trips.push((base + j, t * d + j, sign.clone()));
        }
    }
    RationalMatrix::from_triplets(rows, cols, trips)
}

/// Matrix of `∂ⁿ` for `n ≥ 0`.
pub fn cochain_boundary(group: &Group, v: &GModule, n: usize) -> RationalMatrix {
    let order = group.order();
    let d = v.dim();
    let (rows, cols) = (order.pow(n as u32 + 1) * d, order.pow(n as u32) * d);
    let mut trips: Vec<(usize, usize, Q)> = Vec::new();
    for t in 0..order.pow(n as u32 + 1) {
        let k = tuple_of(t, order, n + 1);
        // g_0 acting on f(g_1…g_n)
        let rest = tuple_index(&k[1..], order) * d;
        for (r, c, a) in v.action(k[0]).triplets() {
            trips.push((t * d + r, rest + c, a.clone()));
        }
        for i in 1..=n {
            let mut merged = k[..i - 1].to_vec();
            merged.push(group.mul(k[i - 1], k[i]));
            merged.extend_from_slice(&k[i + 1..]);
            let base = tuple_index(&merged, order) * d;
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            for j in 0..d {
                trips.push((t * d + j, base + j, sign.clone()));
            }
        }
        let base = tuple_index(&k[..n], order) * d;
        let sign = if (n + 1).is_multiple_of(2) {
            Q::one()
        } else {
            -Q::one()
        };
        for j in 0..d {
            trips.push((t * d + j, base + j, sign.clone()));
        }
    }
    RationalMatrix::from_triplets(rows, cols, trips)
}

/// Chain complex `C_0 ← C_1 ← … ← C_{max_degree}`.
pub fn build_chain_complex(
    coefficients: &GModule,
    max_degree: usize,
    config: &Config,
) -> Result<ChainComplexRep, BarError> {
    let group = coefficients.group().clone();
    check_caps(&group, coefficients, max_degree, config)?;
    let boundaries = config
        .exec
        .map_range(max_degree, |k| chain_boundary(&group, coefficients, k + 1));
    Ok(ChainComplexRep {
        group,
        coefficients: coefficients.clone(),
        orientation: Orientation::Chain,
        max_degree,
        boundaries,
        ranks: OnceLock::new(),
        config: config.clone(),
    })
}

/// Cochain complex `C⁰ → C¹ → … → C^{max_degree}`. For finite groups every
/// cochain is bounded, so this also computes bounded cohomology.
pub fn build_cochain_complex(
    coefficients: &GModule,
    max_degree: usize,
    config: &Config,
) -> Result<ChainComplexRep, BarError> {
    let group = coefficients.group().clone();
    check_caps(&group, coefficients, max_degree, config)?;
    let boundaries = config
        .exec
        .map_range(max_degree, |k| cochain_boundary(&group, coefficients, k));
    Ok(ChainComplexRep {
        group,
        coefficients: coefficients.clone(),
        orientation: Orientation::Cochain,
        max_degree,
        boundaries,
        ranks: OnceLock::new(),
        config: config.clone(),
    })
}

/// True when every composite of consecutive boundaries is exactly zero.
pub fn verify_complex(complex: &ChainComplexRep) -> bool {
    first_nonzero_composite(complex).is_none()
}

/// Index `k` of the first pair `(boundaries[k], boundaries[k+1])` whose
/// composite is nonzero.
pub fn first_nonzero_composite(complex: &ChainComplexRep) -> Option<usize> {
    let b = &complex.boundaries;
    (0..b.len().saturating_sub(1)).find(|&k| {
        let composite = match complex.orientation {
            Orientation::Chain => &b[k] * &b[k + 1],
            Orientation::Cochain => &b[k + 1] * &b[k],
        };
        !composite.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn z2() -> Arc<Group> {
        Arc::new(Group::cyclic(2))
    }

    #[test]
    fn tuple_round_trip() {
        for i in 0..27 {
            assert_eq!(tuple_index(&tuple_of(i, 3, 3), 3), i);
        }
        assert_eq!(tuple_of(5, 2, 3), vec![1, 0, 1]);
    }

    #[test]
    fn trivial_group_homology() {
        let v = GModule::trivial(Arc::new(Group::trivial()), 3);
        let c = build_chain_complex(&v, 3, &Config::default()).unwrap();
        assert!(verify_complex(&c));
        assert_eq!(c.homology_dims(), vec![3, 0, 0]);
        let cc = build_cochain_complex(&v, 3, &Config::default()).unwrap();
        assert!(verify_complex(&cc));
        assert_eq!(cc.homology_dims(), vec![3, 0, 0]);
    }

    #[test]
    fn z2_trivial_module() {
        let v = GModule::trivial(z2(), 1);
        let c = build_chain_complex(&v, 2, &Config::default()).unwrap();
        assert!(c.boundary(1).unwrap().is_zero());
        assert_eq!(c.homology_dim(0).unwrap(), 1);
        assert_eq!(c.homology_dim(1).unwrap(), 0);
        assert!(c.homology_dim(2).is_err());
        let cc = build_cochain_complex(&v, 2, &Config::default()).unwrap();
        assert_eq!(cc.homology_dim(0).unwrap(), 1);
    }

    #[test]
    fn sign_representation() {
        let v = GModule::from_matrices(
            z2(),
            vec![
                RationalMatrix::identity(1),
                RationalMatrix::from_i64_rows(&[&[-1]]),
            ],
            None,
        );
        let c = build_chain_complex(&v, 3, &Config::default()).unwrap();
        assert!(verify_complex(&c));
        assert_eq!(c.homology_dims(), vec![0, 0, 0]);
        let cc = build_cochain_complex(&v, 3, &Config::default()).unwrap();
        assert!(verify_complex(&cc));
        assert_eq!(cc.homology_dims(), vec![0, 0, 0]);
    }

    #[test]
    fn corrupted_entry_breaks_the_complex() {
        let v = GModule::trivial(z2(), 1);
        let mut c = build_chain_complex(&v, 2, &Config::default()).unwrap();
        let b = c.boundaries()[0].clone();
        let bumped = &b + &RationalMatrix::from_triplets(1, 2, vec![(0, 0, q(1))]);
        c.set_boundary(1, bumped);
        assert!(!verify_complex(&c));
        let single = build_chain_complex(&v, 1, &Config::default()).unwrap();
        assert!(verify_complex(&single));
    }

    #[test]
    fn caps_are_enforced() {
        let v = GModule::trivial(z2(), 1);
        let err = build_chain_complex(&v, 4, &Config::default()).unwrap_err();
        assert_eq!(err, BarError::DegreeCap { degree: 4, cap: 3 });
        let cfg = Config {
            size_cap: 4,
            ..Config::default()
        };
        let err = build_cochain_complex(&v, 3, &cfg).unwrap_err();
        assert_eq!(
            err,
            BarError::SizeCap {
                degree: 3,
                dim: 8,
                cap: 4
            }
        );
    }
}
