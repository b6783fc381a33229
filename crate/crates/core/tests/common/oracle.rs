//! Independent dense oracles. Nothing here calls the sparse elimination
//! code under test.

use coe_core::linalg::{RationalMatrix, Q};
use coe_core::modules::GModule;
use num::{Signed, Zero};

/// Textbook Gaussian elimination on a dense copy.
#[allow(clippy::needless_range_loop)]
pub fn dense_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn matrix_rank(m: &RationalMatrix) -> usize {
    dense_rank(&m.to_dense())
}

fn minus_identity(m: &RationalMatrix) -> Vec<Vec<Q>> {
    let mut d = m.to_dense();
    for (i, row) in d.iter_mut().enumerate() {
        row[i] -= Q::from_integer(1.into());
    }
    d
}

/// `dim V − rank span{g·e_i − e_i}`.
pub fn coinvariant_dim(v: &GModule) -> usize {
    // the span of all columns of (A_g − I), stacked side by side; rank via transpose
    let rows: Vec<Vec<Q>> = v
        .group()
        .elements()
        .flat_map(|g| transpose(&minus_identity(v.action(g))))
        .collect();
    v.dim() - dense_rank(&rows)
}

/// Dimension of the common fixed space of all `A_g`.
pub fn invariant_dim(v: &GModule) -> usize {
    let rows: Vec<Vec<Q>> = v
        .group()
        .elements()
        .flat_map(|g| minus_identity(v.action(g)))
        .collect();
    v.dim() - dense_rank(&rows)
}

pub fn transpose(d: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = d.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| d.iter().map(|r| r[c].clone()).collect())
        .collect()
}

/// `Σ_x (max − min)/2` over the `G`-coordinates of `τ` at `x`, with the
/// identity coordinate read as 0. Dual norm of a functional on `N₀` given
/// by its values on the basis `δ_x ⊗ (δ_g − δ_e)`.
pub fn n0_dual_norm(tau: &[Q], points: usize, order: usize) -> Q {
    let per = order - 1;
    (0..points).fold(Q::zero(), |acc, x| {
        let vals = std::iter::once(Q::zero()).chain(tau[x * per..(x + 1) * per].iter().cloned());
        let (mut lo, mut hi) = (Q::zero(), Q::zero());
        for v in vals {
            if v < lo {
                lo = v.clone();
            }
            if v > hi {
                hi = v;
            }
        }
        acc + (hi - lo) / Q::from_integer(2.into())
    })
}

/// `Σ_x max_g |τ_{x,g}|`: dual of the sup-ℓ¹ norm on the full module.
pub fn full_dual_norm(tau: &[Q], points: usize, order: usize) -> Q {
    (0..points).fold(Q::zero(), |acc, x| {
        let m = tau[x * order..(x + 1) * order]
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Q::zero);
        acc + m
    })
}
