//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

#[allow(dead_code)]
#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use coe_cli::instance::{parse_instance, Instance};
use coe_core::action::Action;
use coe_core::bar::{build_chain_complex, build_cochain_complex, verify_complex, ChainComplexRep};
use coe_core::coe::{derive_coe, verify_partition_laws, CoeError, CoeLink, VerifiedLink};
use coe_core::group::Group;
use coe_core::linalg::{RationalMatrix, Q};
use coe_core::modules::{build_full_module, build_n0, build_w0, dualize, GModule};
use coe_core::transfer::{
    build_pi, verify_local_equivariance, verify_transfer, BasisOrder, TransferOptions, TransferRep,
};
use coe_core::Config;
use num::{Signed, Zero};
use oracle::{coinvariant_dim, invariant_dim};
use rand::{Rng, SeedableRng};
use std::sync::Arc;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

struct Corpus {
    instances: Vec<(String, Instance)>,
}

impl Corpus {
    fn load() -> Corpus {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
            .expect("corpus directory")
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let instances = paths
            .iter()
            .map(|p| {
                let name = p.file_stem().unwrap().to_string_lossy().into_owned();
                let inst = parse_instance(&std::fs::read_to_string(p).unwrap()).unwrap();
                (name, inst)
            })
            .collect();
        Corpus { instances }
    }

    fn actions(&self) -> Vec<(String, Arc<Action>)> {
        self.instances
            .iter()
            .flat_map(|(i, inst)| {
                inst.actions
                    .values()
                    .map(move |a| (format!("{i}/{}", a.name), a.action.clone()))
            })
            .collect()
    }

    /// Links whose data verifies, with their basis order.
    fn verified_links(&self) -> Vec<(String, VerifiedLink, BasisOrder)> {
        let mut out = Vec::new();
        for (i, inst) in &self.instances {
            for l in inst.link_names() {
                let Ok(link) = inst.build_link(l).unwrap() else {
                    continue;
                };
                let Ok(v) = VerifiedLink::new(link) else {
                    continue;
                };
                out.push((format!("{i}/{l}"), v, inst.link_doc(l).unwrap().basis_order));
            }
        }
        out
    }

    fn link(&self, instance: &str, link: &str) -> Result<CoeLink, CoeError> {
        let (_, inst) = self
            .instances
            .iter()
            .find(|(n, _)| n == instance)
            .expect("instance in corpus");
        inst.build_link(link).expect("link in instance")
    }

    fn verified(&self, instance: &str, link: &str) -> VerifiedLink {
        VerifiedLink::new(self.link(instance, link).unwrap()).unwrap()
    }
}

fn all_kinds(a: &Arc<Action>) -> Vec<GModule> {
    let (n0, _) = build_n0(a);
    let w0 = build_w0(a);
    let full = build_full_module(a);
    let mut out = vec![dualize(&n0), dualize(&w0), dualize(&full)];
    out.extend([n0, w0, full]);
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1(c: &Corpus) -> Outcome {
    let start = Instant::now();
    let cfg = Config::default();
    let mut count = 0;
    for (name, a) in c.actions() {
        let (n0, _) = build_n0(&a);
        let w0 = build_w0(&a);
        for v in [dualize(&n0), dualize(&w0), n0.clone(), w0.clone()] {
            let chain = build_chain_complex(&v, 3, &cfg).map_err(|e| format!("{name}: {e}"))?;
            let cochain = build_cochain_complex(&v, 3, &cfg).map_err(|e| format!("{name}: {e}"))?;
            ensure(verify_complex(&chain), || {
                format!("{name} {} chain", v.kind())
            })?;
            ensure(verify_complex(&cochain), || {
                format!("{name} {} cochain", v.kind())
            })?;
            count += 2;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "{count} complexes to degree 3 in {:.2} s",
        t.as_secs_f64()
    ))
}

fn inverse_relation_failures(link: &CoeLink) -> usize {
    let mut bad = 0;
    for g in link.source().group().elements() {
        for x in 0..link.source().size() {
            bad += usize::from(link.cprime(link.c(g, x), link.phi(x)) != g);
        }
    }
    for h in link.target().group().elements() {
        for y in 0..link.target().size() {
            bad += usize::from(link.c(link.cprime(h, y), link.psi(y)) != h);
        }
    }
    bad
}

fn criterion_2(c: &Corpus) -> Outcome {
    let links = c.verified_links();
    ensure(links.len() >= 4, || {
        format!("only {} verified links", links.len())
    })?;
    for (name, l, _) in &links {
        let bad = inverse_relation_failures(l);
        ensure(bad == 0, || format!("{name}: {bad} failures"))?;
    }
    Ok(format!("{} links, zero failures", links.len()))
}

fn sup_l1(v: &[Q], order: usize) -> Q {
    v.chunks(order)
        .map(|c| c.iter().fold(Q::zero(), |acc, x| acc + x.abs()))
        .max()
        .unwrap_or_else(Q::zero)
}

fn criterion_3(c: &Corpus) -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let links = c.verified_links();
    for (name, l, _) in &links {
        let pi = build_pi(l);
        ensure(pi.certificates.passed(), || {
            format!("{name}: {:?}", pi.certificates.failures().next())
        })?;
        let rep = TransferRep::build(
            l,
            &TransferOptions {
                max_degree: 0,
                ..Default::default()
            },
        )
        .unwrap();
        let n = rep.pi.rows();
        ensure(rep.pi.is_permutation(), || {
            format!("{name}: not a permutation")
        })?;
        ensure(
            (&rep.pi * &rep.l).is_identity() && (&rep.l * &rep.pi).is_identity(),
            || format!("{name}: pi L or L pi is not the identity"),
        )?;
        let (ng, nh) = (l.source().group().order(), l.target().group().order());
        let basis = (0..n).map(|i| {
            (0..n)
                .map(|j| Q::from_integer(i64::from(i == j).into()))
                .collect()
        });
        let random = (0..100).map(|_| {
            (0..n)
                .map(|_| {
                    Q::new(
                        rng.gen_range(-9i64..=9).into(),
                        rng.gen_range(1i64..=7).into(),
                    )
                })
                .collect::<Vec<Q>>()
        });
        for (k, v) in basis.chain(random).enumerate() {
            let (before, after) = (sup_l1(&v, nh), sup_l1(&rep.pi.mul_vec(&v), ng));
            ensure(before == after, || {
                format!("{name}: vector {k} norm {before} -> {after}")
            })?;
        }
    }
    Ok(format!(
        "{} links, basis plus 100 random vectors each",
        links.len()
    ))
}

fn criterion_4(c: &Corpus) -> Outcome {
    let mut cases = 0;
    for (name, l, _) in c.verified_links() {
        let r = verify_local_equivariance(&l);
        ensure(r.passed(), || format!("{name}: {:?}", r.failures().next()))?;
        ensure(r.checks.len() == 3, || {
            format!("{name}: expected three checks")
        })?;
        cases += r.checks.iter().map(|c| c.cases).sum::<u64>();
    }
    Ok(format!("{cases} cases, zero failures"))
}

fn criterion_5(c: &Corpus) -> Outcome {
    let mut cases = 0;
    for (name, l, _) in c.verified_links() {
        let r = verify_partition_laws(&l, 3);
        ensure(r.passed(), || format!("{name}: {:?}", r.failures().next()))?;
        ensure(r.checks.len() == 8, || {
            format!("{name}: expected four laws per side")
        })?;
        cases += r.checks.iter().map(|c| c.cases).sum::<u64>();
    }
    Ok(format!("{cases} cases to degree 3, zero failures"))
}

fn transfer_links(c: &Corpus) -> Vec<(&'static str, VerifiedLink)> {
    vec![
        ("identity_z2", c.verified("identity_z2", "identity")),
        ("identity_z4", c.verified("identity_z4", "identity")),
        ("z4_vs_klein", c.verified("z4_vs_klein", "z4_vs_klein")),
        ("block_swap", c.verified("block_swap", "block_swap")),
    ]
}

/// Recomputes the chain-map and inverse identities directly from the
/// matrices.
fn homology_identities(
    rep: &TransferRep,
    gx: &ChainComplexRep,
    hy: &ChainComplexRep,
    max: usize,
) -> Result<(), String> {
    for n in 1..=max {
        let lhs = hy.boundary(n).unwrap() * &rep.s_hom[n];
        let rhs = &rep.s_hom[n - 1] * gx.boundary(n).unwrap();
        ensure(lhs == rhs, || format!("d_{n} S_{n} != S_{} d_{n}", n - 1))?;
    }
    for n in 0..=max {
        let id = RationalMatrix::identity(rep.s_hom[n].cols());
        ensure(&rep.t_hom[n] * &rep.s_hom[n] == id, || {
            format!("T_{n} S_{n} != id")
        })?;
        let id = RationalMatrix::identity(rep.s_hom[n].rows());
        ensure(&rep.s_hom[n] * &rep.t_hom[n] == id, || {
            format!("S_{n} T_{n} != id")
        })?;
    }
    Ok(())
}

const NOTE: &str = "positive-degree homology and cohomology vanish for finite groups";

fn criterion_6(c: &Corpus) -> Outcome {
    let cfg = Config::default();
    for (name, l) in transfer_links(c) {
        let opts = TransferOptions {
            max_degree: 3,
            lp_samples: 1,
            random_vectors: 1,
            ..Default::default()
        };
        let rep = TransferRep::build(&l, &opts).unwrap();
        let gx = build_chain_complex(&dualize(&build_n0(l.source()).0), 3, &cfg).unwrap();
        let hy = build_chain_complex(&dualize(&build_n0(l.target()).0), 3, &cfg).unwrap();
        homology_identities(&rep, &gx, &hy, 3).map_err(|e| format!("{name}: {e}"))?;
        for n in 0..=2 {
            let (a, b) = (gx.homology_dim(n).unwrap(), hy.homology_dim(n).unwrap());
            ensure(a == b, || format!("{name}: dim H_{n} {a} vs {b}"))?;
        }
        let report = verify_transfer(&l, &opts).unwrap();
        for check in [
            "homology chain map S",
            "homology chain map T",
            "homology T S = id",
            "homology S T = id",
        ] {
            let ok = report.verification.check(check).is_some_and(|c| c.passed);
            ensure(ok, || {
                format!("{name}: report check `{check}` did not pass")
            })?;
        }
        ensure(report.notes.iter().any(|n| n.starts_with(NOTE)), || {
            format!("{name}: note missing")
        })?;
    }
    Ok("4 links, n <= 3, dims agree for n <= 2".into())
}

fn criterion_7(c: &Corpus) -> Outcome {
    let cfg = Config::default();
    for (name, l) in transfer_links(c) {
        let rep = TransferRep::build(
            &l,
            &TransferOptions {
                max_degree: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let gx = build_cochain_complex(&build_n0(l.source()).0, 3, &cfg).unwrap();
        let hy = build_cochain_complex(&build_n0(l.target()).0, 3, &cfg).unwrap();
        for n in 0..=2 {
            let lhs = gx.boundary(n).unwrap() * &rep.s_coh[n];
            let rhs = &rep.s_coh[n + 1] * hy.boundary(n).unwrap();
            ensure(lhs == rhs, || {
                format!("{name}: d^{n} S^{n} != S^{} d^{n}", n + 1)
            })?;
            let lhs = hy.boundary(n).unwrap() * &rep.t_coh[n];
            let rhs = &rep.t_coh[n + 1] * gx.boundary(n).unwrap();
            ensure(lhs == rhs, || {
                format!("{name}: d^{n} T^{n} != T^{} d^{n}", n + 1)
            })?;
            let ts = &rep.t_coh[n] * &rep.s_coh[n];
            let st = &rep.s_coh[n] * &rep.t_coh[n];
            ensure(ts.is_identity() && st.is_identity(), || {
                format!("{name}: S^{n}, T^{n} not inverse")
            })?;
        }
        let (a, b) = (gx.homology_dim(0).unwrap(), hy.homology_dim(0).unwrap());
        ensure(a == b, || format!("{name}: dim H^0 {a} vs {b}"))?;
        let (oa, ob) = (
            invariant_dim(&build_n0(l.source()).0),
            invariant_dim(&build_n0(l.target()).0),
        );
        ensure(a == oa && b == ob, || {
            format!("{name}: H^0 disagrees with the invariant oracle")
        })?;
    }
    Ok("4 links, n <= 2, dim H^0 invariant".into())
}

fn criterion_8(c: &Corpus) -> Outcome {
    let mut comparisons = 0;
    let mut tight = 0;
    for (name, l, _) in c.verified_links() {
        let opts = TransferOptions {
            max_degree: 1,
            lp_samples: 50,
            random_vectors: 1,
            ..Default::default()
        };
        let report = verify_transfer(&l, &opts).unwrap();
        let sweep = &report.norm_sweep;
        ensure(!sweep.skipped_over_cap, || {
            format!("{name}: skipped over the dimension cap")
        })?;
        ensure(sweep.comparisons == 50 * 3 * 2, || {
            format!("{name}: {} comparisons", sweep.comparisons)
        })?;
        let check = report
            .verification
            .check("sum of restricted dual norms <= dual norm")
            .unwrap();
        ensure(check.passed, || format!("{name}: {:?}", check.witness))?;
        comparisons += sweep.comparisons;
        tight += sweep.tight;
    }
    Ok(format!(
        "{comparisons} exact comparisons, {tight} with equality"
    ))
}

fn criterion_9(c: &Corpus) -> Outcome {
    let cfg = Config::default();
    let actions = c.actions();
    for (name, a) in &actions {
        let n = build_chain_complex(&dualize(&build_n0(a).0), 1, &cfg)
            .unwrap()
            .homology_dim(0)
            .unwrap();
        let w = build_chain_complex(&dualize(&build_w0(a)), 1, &cfg)
            .unwrap()
            .homology_dim(0)
            .unwrap();
        ensure(w == n + 1, || {
            format!("{name}: dim H_0(W0*) = {w}, dim H_0(N0*) = {n}")
        })?;
    }
    Ok(format!("{} actions", actions.len()))
}

fn criterion_10(c: &Corpus) -> Outcome {
    // the two reference values come from the oracle alone
    let z2 = Arc::new(Action::regular(Arc::new(Group::cyclic(2))));
    let pt = Arc::new(Action::trivial(
        Arc::new(Group::cyclic(2)),
        coe_core::action::FiniteSpace::new(1),
    ));
    let reg = coinvariant_dim(&dualize(&build_n0(&z2).0));
    let point = coinvariant_dim(&dualize(&build_n0(&pt).0));
    ensure(reg == 1 && point == 0, || {
        format!("oracle gives {reg} and {point}")
    })?;

    let cfg = Config::default();
    let mut count = 0;
    let mut actions = c.actions();
    actions.push(("z2_regular".into(), z2));
    actions.push(("z2_point".into(), pt));
    for (name, a) in &actions {
        for v in all_kinds(a) {
            let h0 = build_chain_complex(&v, 1, &cfg)
                .unwrap()
                .homology_dim(0)
                .unwrap();
            let co0 = build_cochain_complex(&v, 1, &cfg)
                .unwrap()
                .homology_dim(0)
                .unwrap();
            ensure(h0 == coinvariant_dim(&v), || {
                format!("{name} {}: H_0 {h0}", v.kind())
            })?;
            ensure(co0 == invariant_dim(&v), || {
                format!("{name} {}: H^0 {co0}", v.kind())
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} (action, coefficient) pairs; Z/2 regular gives 1, Z/2 on a point gives 0"
    ))
}

fn criterion_11(c: &Corpus) -> Outcome {
    let corrupted = c.link("corrupted_cocycle", "corrupted").unwrap();
    let bad = inverse_relation_failures(&corrupted);
    ensure(bad > 0, || {
        "corrupted cocycle passes the inverse relations".into()
    })?;

    let (_, flipped, order) = c
        .verified_links()
        .into_iter()
        .find(|(n, _, _)| n == "basis_flip/flipped")
        .ok_or("flipped link missing")?;
    ensure(order == BasisOrder::Flipped, || {
        "fixture does not flip".into()
    })?;
    let cfg = Config::default();
    let rep = TransferRep::build(
        &flipped,
        &TransferOptions {
            max_degree: 3,
            basis_order: order,
            ..Default::default()
        },
    )
    .unwrap();
    let gx = build_chain_complex(&dualize(&build_n0(flipped.source()).0), 3, &cfg).unwrap();
    let hy = build_chain_complex(&dualize(&build_n0(flipped.target()).0), 3, &cfg).unwrap();
    let err = homology_identities(&rep, &gx, &hy, 3);
    ensure(err.is_err(), || {
        "flipped basis order satisfies the chain-map identities".into()
    })?;

    let (_, nonfree) = c
        .instances
        .iter()
        .find(|(n, _)| n == "nonfree")
        .ok_or("nonfree fixture missing")?;
    let a = nonfree.actions["fixed_pair"].action.clone();
    let res = derive_coe(a.clone(), a, vec![0, 1]);
    ensure(
        matches!(res, Err(CoeError::HypothesisViolation { .. })),
        || format!("{res:?}"),
    )?;
    Ok(format!(
        "corrupted: {bad} failures; flipped: {}; non-free rejected",
        err.unwrap_err()
    ))
}

fn criterion_12() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_coe");
    let start = Instant::now();
    let run = || {
        Process::new(bin)
            .args(["report", "--instance"])
            .arg(corpus_dir())
            .args(["--format", "json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let t = start.elapsed();
    ensure(a.status.code() == Some(0), || {
        format!(
            "exit code {:?}: {}",
            a.status.code(),
            String::from_utf8_lossy(&a.stderr)
        )
    })?;
    ensure(a.stdout == b.stdout, || {
        "outputs differ between runs".into()
    })?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!(
        "two runs in {:.2} s, {} identical bytes",
        t.as_secs_f64(),
        a.stdout.len()
    ))
}

fn main() {
    let corpus = Corpus::load();
    let criteria: Vec<Criterion> = vec![
        ("complex soundness", Box::new(|| criterion_1(&corpus))),
        (
            "inverse relations of the cocycles",
            Box::new(|| criterion_2(&corpus)),
        ),
        ("structure of pi", Box::new(|| criterion_3(&corpus))),
        ("restriction identities", Box::new(|| criterion_4(&corpus))),
        ("partition laws", Box::new(|| criterion_5(&corpus))),
        ("homology transfer", Box::new(|| criterion_6(&corpus))),
        ("cohomology transfer", Box::new(|| criterion_7(&corpus))),
        ("restricted dual norms", Box::new(|| criterion_8(&corpus))),
        (
            "uniformly finite H_0 decomposition",
            Box::new(|| criterion_9(&corpus)),
        ),
        ("oracle cross-checks", Box::new(|| criterion_10(&corpus))),
        ("negative controls", Box::new(|| criterion_11(&corpus))),
        ("end-to-end report", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
