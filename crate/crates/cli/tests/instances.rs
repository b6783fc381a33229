use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use coe_cli::instance::{
    parse_instance, to_json, ActionDoc, GroupDoc, InstanceDoc, InstanceError, LinkDoc, Outcome,
    ParamsDoc,
};
use coe_core::transfer::BasisOrder;
use proptest::prelude::*;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn arb_group() -> impl Strategy<Value = GroupDoc> {
    let leaf = prop_oneof![
        Just(GroupDoc::Trivial),
        (1usize..6).prop_map(|order| GroupDoc::Cyclic { order }),
        (3usize..5).prop_map(|n| GroupDoc::Dihedral { n }),
        (2usize..4).prop_map(|n| GroupDoc::Symmetric { n }),
    ];
    leaf.prop_recursive(2, 4, 3, |inner| {
        prop::collection::vec(inner, 1..3).prop_map(|factors| GroupDoc::Product { factors })
    })
}

fn arb_doc() -> impl Strategy<Value = InstanceDoc> {
    (
        arb_group(),
        1usize..3,
        any::<bool>(),
        prop::option::of(0u64..1000),
        prop::option::of(0usize..4),
        prop_oneof![
            Just(Outcome::Pass),
            Just(Outcome::Fail),
            Just(Outcome::Reject)
        ],
    )
        .prop_map(|(g, copies, flip, seed, max_degree, expect)| {
            let mut doc = InstanceDoc {
                groups: BTreeMap::from([("g".to_string(), g)]),
                actions: BTreeMap::from([
                    (
                        "a".to_string(),
                        ActionDoc::Regular {
                            group: "g".into(),
                            copies,
                        },
                    ),
                    (
                        "p".to_string(),
                        ActionDoc::Trivial {
                            group: "g".into(),
                            points: 2,
                        },
                    ),
                ]),
                links: BTreeMap::new(),
                params: ParamsDoc {
                    seed,
                    max_degree,
                    ..Default::default()
                },
            };
            doc.links.insert(
                "l".into(),
                LinkDoc {
                    source: "a".into(),
                    target: "a".into(),
                    phi: vec![0],
                    psi: None,
                    c: None,
                    cprime: None,
                    expect,
                    basis_order: if flip {
                        BasisOrder::Flipped
                    } else {
                        BasisOrder::Standard
                    },
                },
            );
            doc
        })
}

proptest! {
    #[test]
    fn documents_round_trip(doc in arb_doc()) {
        let text = to_json(&doc);
        let back: InstanceDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(to_json(&back), text);
    }
}

#[test]
fn corpus_round_trips() {
    for entry in std::fs::read_dir(corpus()).unwrap() {
        let path = entry.unwrap().path();
        let inst = parse_instance(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = parse_instance(&inst.to_json()).unwrap();
        assert_eq!(inst.doc, again.doc, "{}", path.display());
    }
}

#[test]
fn z4_vs_klein_fixture() {
    let inst = parse_instance(&std::fs::read_to_string(corpus().join("z4_vs_klein.json")).unwrap())
        .unwrap();
    assert_eq!(inst.link_names().collect::<Vec<_>>(), ["z4_vs_klein"]);
    let link = inst.build_link("z4_vs_klein").unwrap().unwrap();
    assert_eq!(link.source().group().order(), 4);
    assert_eq!(link.target().group().order(), 4);
}

#[test]
fn unknown_keys_are_rejected() {
    let text = r#"{"groups": {"g": {"kind": "cyclic", "order": 2, "oder": 3}}}"#;
    assert!(matches!(
        parse_instance(text),
        Err(InstanceError::Syntax { .. })
    ));
    let text = r#"{"groups": {}, "paramz": {}}"#;
    assert!(matches!(
        parse_instance(text),
        Err(InstanceError::Syntax { .. })
    ));
}

#[test]
fn dangling_names_are_rejected() {
    let text = r#"{"actions": {"a": {"kind": "regular", "group": "missing"}}}"#;
    assert!(matches!(
        parse_instance(text),
        Err(InstanceError::Unresolved { .. })
    ));
}
