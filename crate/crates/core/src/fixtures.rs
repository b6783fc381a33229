//! Small named actions and links used by tests, benches and the bundled
//! corpus.

use std::sync::Arc;

use crate::action::{build_action, Action, FiniteSpace};
use crate::coe::{derive_coe, CoeLink, VerifiedLink};
use crate::group::Group;

pub fn regular(group: Group) -> Arc<Action> {
    Arc::new(Action::regular(Arc::new(group)))
}

/// The identity self-link of the regular action of `Z/n`.
pub fn identity_link(n: usize) -> VerifiedLink {
    let a = regular(Group::cyclic(n));
    let link = derive_coe(a.clone(), a, (0..n).collect()).expect("regular actions are free");
    VerifiedLink::new(link).expect("identity link verifies")
}

/// Regular `Z/4` against the regular Klein four-group, `φ = id` on points.
pub fn z4_vs_klein() -> VerifiedLink {
    let z4 = regular(Group::cyclic(4));
    let klein = regular(Group::product_of(&Group::cyclic(2), &Group::cyclic(2)));
    let link = derive_coe(z4, klein, (0..4).collect()).expect("regular actions are free");
    VerifiedLink::new(link).expect("link verifies")
}

/// `Z/2` acting on `{0,1,2,3}` with free orbits `{0,1}`, `{2,3}`.
pub fn two_orbit_z2() -> Arc<Action> {
    let z2 = Arc::new(Group::cyclic(2));
    Arc::new(
        build_action(
            z2,
            FiniteSpace::new(4),
            vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]],
        )
        .expect("valid action"),
    )
}

/// The two-orbit `Z/2` action against itself with `φ` swapping the blocks.
pub fn block_swap() -> VerifiedLink {
    let a = two_orbit_z2();
    let link = derive_coe(a.clone(), a, vec![2, 3, 0, 1]).expect("free action");
    VerifiedLink::new(link).expect("link verifies")
}

/// `Z/2` acting trivially on one point.
pub fn z2_on_point() -> Arc<Action> {
    Arc::new(Action::trivial(
        Arc::new(Group::cyclic(2)),
        FiniteSpace::new(1),
    ))
}

/// `Z/4` against Klein with a single entry of `c` changed. The pair is
/// unverified by construction.
pub fn corrupted_cocycle() -> CoeLink {
    let link = z4_vs_klein();
    let mut c = link.c_table();
    c[1][0] = (c[1][0] + 1) % 4;
    link.with_tables(c, link.cprime_table())
        .expect("shapes unchanged")
}
