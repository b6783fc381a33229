//! Shared helpers for the integration tests: dense oracles and random
//! link generators.
#![allow(dead_code)]

mod oracle;

#[allow(unused_imports)]
pub use oracle::*;

use coe_core::linalg::Q;
use num::Zero;

use std::sync::Arc;

use coe_core::action::{build_action, Action, FiniteSpace};
use coe_core::coe::{derive_coe, VerifiedLink};
use coe_core::group::Group;
use proptest::prelude::*;

/// Groups grouped by order, for pairing up orbit equivalent actions.
pub fn groups_of_order(n: usize) -> Vec<Group> {
    let c2 = Group::cyclic(2);
    match n {
        2 => vec![c2],
        4 => vec![Group::cyclic(4), Group::product_of(&c2, &c2)],
        6 => vec![
            Group::cyclic(6),
            Group::dihedral(3),
            Group::symmetric(3).unwrap(),
        ],
        8 => vec![
            Group::cyclic(8),
            Group::dihedral(4),
            Group::product_of(&c2, &Group::cyclic(4)),
        ],
        _ => vec![Group::cyclic(n)],
    }
}

/// `copies` disjoint copies of the left regular action.
pub fn regular_copies(group: Group, copies: usize) -> Arc<Action> {
    let n = group.order();
    let perms = group
        .elements()
        .map(|k| {
            (0..copies)
                .flat_map(|i| (0..n).map(move |g| (i, g)))
                .map(|(i, g)| i * n + group.mul(k, g))
                .collect()
        })
        .collect();
    Arc::new(build_action(Arc::new(group.clone()), FiniteSpace::new(copies * n), perms).unwrap())
}

/// A random link between free actions with `copies` orbits each: blocks are
/// permuted and points inside each block shuffled.
pub fn arb_link(
    orders: &'static [usize],
    max_copies: usize,
) -> impl Strategy<Value = VerifiedLink> {
    (prop::sample::select(orders), 1..=max_copies, any::<u64>()).prop_map(|(n, copies, seed)| {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let choices = groups_of_order(n);
        let g = choices[rng.gen_range(0..choices.len())].clone();
        let h = choices[rng.gen_range(0..choices.len())].clone();
        let mut blocks: Vec<usize> = (0..copies).collect();
        blocks.shuffle(&mut rng);
        let mut phi = vec![0; n * copies];
        for (i, &b) in blocks.iter().enumerate() {
            let mut inner: Vec<usize> = (0..n).collect();
            inner.shuffle(&mut rng);
            for (k, &j) in inner.iter().enumerate() {
                phi[i * n + k] = b * n + j;
            }
        }
        let link = derive_coe(regular_copies(g, copies), regular_copies(h, copies), phi).unwrap();
        VerifiedLink::new(link).unwrap()
    })
}

pub fn arb_rational() -> impl Strategy<Value = Q> {
    (-8i64..=8, 1i64..=6).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

pub fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        // mostly zeros, like the boundary matrices
        let entry = prop_oneof![3 => Just(Q::zero()), 2 => arb_rational()];
        prop::collection::vec(prop::collection::vec(entry, c), r)
    })
}
