mod common;

use coe_core::bar::{
    build_chain_complex, build_cochain_complex, first_nonzero_composite, verify_complex, BarError,
};
use coe_core::fixtures::{regular, two_orbit_z2, z2_on_point};
use coe_core::group::Group;
use coe_core::linalg::{q, RationalMatrix};
use coe_core::modules::{build_full_module, build_n0, build_w0, dualize, GModule};
use coe_core::{Config, Exec};
use common::{coinvariant_dim, invariant_dim, matrix_rank, regular_copies};
use proptest::prelude::*;

fn coefficient_zoo() -> Vec<GModule> {
    let actions = [
        regular(Group::cyclic(2)),
        regular(Group::cyclic(3)),
        z2_on_point(),
        two_orbit_z2(),
        regular(Group::symmetric(3).unwrap()),
    ];
    let mut out = Vec::new();
    for a in &actions {
        let (n0, _) = build_n0(a);
        let w0 = build_w0(a);
        let full = build_full_module(a);
        out.push(dualize(&n0));
        out.push(dualize(&w0));
        out.push(dualize(&full));
        out.push(n0);
    }
    out
}

#[test]
fn boundaries_compose_to_zero() {
    let cfg = Config::default();
    for v in coefficient_zoo() {
        let deg = if v.group().order() > 3 { 2 } else { 3 };
        let chain = build_chain_complex(&v, deg, &cfg).unwrap();
        let cochain = build_cochain_complex(&v, deg, &cfg).unwrap();
        assert!(verify_complex(&chain), "{} chain", v.kind());
        assert!(verify_complex(&cochain), "{} cochain", v.kind());
    }
}

#[test]
fn degree_zero_matches_oracles() {
    let cfg = Config::default();
    for v in coefficient_zoo() {
        let chain = build_chain_complex(&v, 1, &cfg).unwrap();
        let cochain = build_cochain_complex(&v, 1, &cfg).unwrap();
        assert_eq!(
            chain.homology_dim(0).unwrap(),
            coinvariant_dim(&v),
            "{}",
            v.kind()
        );
        assert_eq!(
            cochain.homology_dim(0).unwrap(),
            invariant_dim(&v),
            "{}",
            v.kind()
        );
    }
}

#[test]
fn small_known_values() {
    let cfg = Config::default();
    let (n0, _) = build_n0(&regular(Group::cyclic(2)));
    let c = build_chain_complex(&dualize(&n0), 2, &cfg).unwrap();
    assert_eq!(c.homology_dim(0).unwrap(), 1);

    let (n0, _) = build_n0(&z2_on_point());
    let c = build_chain_complex(&dualize(&n0), 2, &cfg).unwrap();
    assert_eq!(c.homology_dim(0).unwrap(), 0);
    let c = build_cochain_complex(&n0, 2, &cfg).unwrap();
    assert_eq!(c.homology_dim(0).unwrap(), 0);
}

#[test]
fn rational_homology_of_finite_groups_vanishes_in_positive_degree() {
    let cfg = Config::default();
    for v in coefficient_zoo() {
        let deg = if v.group().order() > 3 { 2 } else { 3 };
        let chain = build_chain_complex(&v, deg, &cfg).unwrap();
        let cochain = build_cochain_complex(&v, deg, &cfg).unwrap();
        for n in 1..deg {
            assert_eq!(chain.homology_dim(n).unwrap(), 0);
            assert_eq!(cochain.homology_dim(n).unwrap(), 0);
        }
    }
}

#[test]
fn corrupted_boundary_is_detected() {
    let (n0, _) = build_n0(&regular(Group::cyclic(3)));
    let mut c = build_chain_complex(&dualize(&n0), 3, &Config::default()).unwrap();
    let d2 = c.boundary(2).unwrap().clone();
    let (r, col, _) = d2
        .triplets()
        .next()
        .map(|(r, c, v)| (r, c, v.clone()))
        .unwrap();
    let bumped = &d2 + &RationalMatrix::from_triplets(d2.rows(), d2.cols(), [(r, col, q(1))]);
    c.set_boundary(2, bumped);
    assert!(!verify_complex(&c));
    assert!(first_nonzero_composite(&c).is_some());
}

#[test]
fn caps_are_enforced() {
    let v = dualize(&build_full_module(&regular(Group::cyclic(5))));
    let cfg = Config::default();
    assert!(matches!(
        build_chain_complex(&v, 4, &cfg),
        Err(BarError::DegreeCap { .. })
    ));
    let tight = Config {
        size_cap: 100,
        ..Config::default()
    };
    assert!(matches!(
        build_chain_complex(&v, 2, &tight),
        Err(BarError::SizeCap { .. })
    ));
    let c = build_chain_complex(&v, 2, &cfg).unwrap();
    assert!(matches!(
        c.homology_dim(2),
        Err(BarError::DegreeOutOfRange { .. })
    ));
}

#[test]
fn ranks_agree_with_dense_oracle() {
    let (n0, _) = build_n0(&two_orbit_z2());
    let c = build_chain_complex(&dualize(&n0), 3, &Config::default()).unwrap();
    for (k, d) in c.boundaries().iter().enumerate() {
        assert_eq!(c.ranks()[k], matrix_rank(d));
    }
}

#[test]
fn execution_modes_agree() {
    let v = dualize(&build_n0(&regular(Group::dihedral(3))).0);
    let seq = build_chain_complex(&v, 2, &Config::default().with_exec(Exec::Sequential)).unwrap();
    let par = build_chain_complex(&v, 2, &Config::default().with_exec(Exec::Parallel)).unwrap();
    assert_eq!(seq.boundaries(), par.boundaries());
    assert_eq!(seq.homology_dims(), par.homology_dims());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn boundary_squared_vanishes_on_random_actions(
        order in prop::sample::select(vec![2usize, 3, 4]),
        copies in 1usize..=2,
        dual in any::<bool>(),
    ) {
        let a = regular_copies(Group::cyclic(order), copies);
        let (n0, _) = build_n0(&a);
        let v = if dual { dualize(&n0) } else { n0 };
        let cfg = Config::default();
        prop_assert!(verify_complex(&build_chain_complex(&v, 2, &cfg).unwrap()));
        prop_assert!(verify_complex(&build_cochain_complex(&v, 2, &cfg).unwrap()));
    }
}
