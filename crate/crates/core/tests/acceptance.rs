//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//! Everything is exact: zero tolerance, symbolic in family parameters.
//!
//! Known red check: `criterion4_stated_value_der_j03` asserts the stated
//! derivation dimension 3 for J03, but the shipped (verbatim) table of J03
//! has a four-dimensional derivation algebra; see the decisions ledger for
//! the analysis.  Every other criterion passes.

use algtool::algebra::AlgebraDef;
use algtool::catalog::{
    invariant_fingerprint, verify_catalog, verify_isomorphism, Catalog, Claim, NameSpec, Report,
    Status, VerifyOptions,
};
use algtool::cohomology::{act, extend, is_cocycle, verify_automorphism, z2_basis, Cocycle};
use algtool::degeneration::{
    self, borel_sample_against_set, derivation_dimension, in_closed_set, verify_degeneration,
};
use algtool::identities::{check_identity_alg, IdentityName};
use algtool::linalg::Matrix;
use algtool::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("catalog")
}

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::load(&catalog_dir()).expect("shipped catalog loads cleanly"))
}

/// Full driver report with the default options (seed 0, 500 trials); shared
/// across the tests that grade driver output.
fn full_report() -> &'static Report {
    static REP: OnceLock<Report> = OnceLock::new();
    REP.get_or_init(|| verify_catalog(catalog(), &VerifyOptions::default()))
}

fn resolve(spec: &str) -> AlgebraDef {
    let cat = catalog();
    let (name, binds) = match spec.split_once('(') {
        None => (spec.to_string(), BTreeMap::new()),
        Some((n, rest)) => {
            let rest = rest.strip_suffix(')').unwrap();
            let mut b = BTreeMap::new();
            for part in rest.split(',') {
                let (k, v) = part.split_once('=').unwrap();
                b.insert(k.trim().to_string(), Scalar::parse(v.trim()).unwrap());
            }
            (n.to_string(), b)
        }
    };
    let e = cat.entry(&name).expect(&name);
    if binds.is_empty() {
        e.algebra.clone()
    } else {
        e.algebra.substitute(&binds).unwrap()
    }
}

fn line(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{} {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

const ASSCOM: &[&str] = &[
    "A01", "A02_0", "A03", "A04", "A05", "A06", "A07", "A08", "A09", "A10", "A11",
];
const JORDAN3: &[&str] = &[
    "A12", "A13_0", "A14_00", "A15", "A16", "A17_0", "A18_0", "A19_0",
];
const ANT3: &[&str] = &["A20", "A21", "A22", "A23", "A24", "A25", "A26"];
const NCJ3: &[&str] = &[
    "A02", "A13", "A14", "A17", "A18", "A19", "A27", "A28", "A29", "A30", "A31", "A32", "A33",
];
const KOKORIS3: &[&str] = &["A02", "A27", "A28", "A29", "A30"];
const STANDARD3: &[&str] = &[
    "A02",
    "A13(alpha=1/2)",
    "A13(alpha=-1/2)",
    "A14(alpha=0, beta=1/2)",
    "A14(alpha=0, beta=-1/2)",
    "A14(alpha=1/2, beta=1/2)",
    "A14(alpha=-1/2, beta=-1/2)",
    "A14(alpha=1/2, beta=-1/2)",
    "A17(alpha=1/2)",
    "A18(alpha=1/2)",
    "A18(alpha=-1/2)",
    "A19(alpha=1/2)",
    "A19(alpha=-1/2)",
    "A20",
    "A28",
];

fn jnames() -> Vec<String> {
    (1..=18).map(|i| format!("J{i:02}")).collect()
}

#[test]
fn criterion1_identity_membership() {
    let mut checked = 0usize;
    let mut check = |spec: &str, id: IdentityName| {
        let a = resolve(spec);
        let v = check_identity_alg(&a, id);
        assert!(v.holds(), "criterion 1: {spec} fails {id}: {v}");
        checked += 1;
    };
    for n in ASSCOM {
        check(n, IdentityName::Associative);
        check(n, IdentityName::Commutative);
        check(n, IdentityName::Jordan);
    }
    for n in JORDAN3 {
        check(n, IdentityName::Commutative);
        check(n, IdentityName::Jordan);
    }
    for n in ANT3 {
        check(n, IdentityName::Anticommutative);
    }
    for n in NCJ3 {
        check(n, IdentityName::NcJordan);
    }
    for n in KOKORIS3 {
        check(n, IdentityName::Flexible);
        check(n, IdentityName::Kokoris);
    }
    for n in STANDARD3 {
        check(n, IdentityName::Standard1);
        check(n, IdentityName::Standard2);
    }
    for n in jnames() {
        check(&n, IdentityName::Standard);
    }
    line(
        "criterion1/identity-membership",
        true,
        &format!("{checked} exact symbolic identity checks hold"),
    );
}

#[test]
fn criterion2_z2_dimensions() {
    let expect: &[(&str, usize)] = &[
        ("A03", 0),
        ("A04", 0),
        ("A05", 0),
        ("A07", 0),
        ("A08", 0),
        ("A09", 0),
        ("A11", 0),
        ("A12", 0),
        ("A15", 0),
        ("A16", 0),
        ("A01", 2),
        ("A06", 2),
        ("A10", 2),
        ("A02_0", 1),
        ("A13_0", 1),
        ("A17_0", 1),
        ("A18_0", 1),
        ("A19_0", 1),
        ("A14_00", 6),
    ];
    for (name, d) in expect {
        let a = resolve(name);
        let space = z2_basis(&a).unwrap();
        assert_eq!(
            space.generic_dimension, *d,
            "criterion 2: dim Z2({name}) = {}, expected {d}",
            space.generic_dimension
        );
        for theta in &space.basis {
            assert!(is_cocycle(&a, theta));
        }
    }
    line(
        "criterion2/z2-dimensions",
        true,
        &format!("{} cocycle-space dimensions match", expect.len()),
    );
}

#[test]
fn criterion3_extension_reconstruction() {
    let cat = catalog();
    let names = [
        "A27", "A28", "A29", "A30", "A31", "A32", "A33", "A02", "A13", "A14", "A17", "A18", "A19",
    ];
    for name in names {
        let e = cat.entry(name).unwrap();
        let plus = e
            .claims
            .iter()
            .find_map(|c| match c {
                Claim::PlusPart(p) => Some(p.clone()),
                _ => None,
            })
            .expect("plus part stored");
        let theta = e
            .claims
            .iter()
            .find_map(|c| match c {
                Claim::CocycleCoords(t) => Some(t.clone()),
                _ => None,
            })
            .expect("cocycle stored");
        let j = cat.entry(&plus).unwrap().algebra.clone();
        let ext = extend(&j, &theta).unwrap();
        assert!(
            ext.same_table(&e.algebra),
            "criterion 3: extend({plus}, theta) differs from the {name} table"
        );
    }
    line(
        "criterion3/extension-reconstruction",
        true,
        &format!("{} published tables rebuilt from (plus part, cocycle)", names.len()),
    );
}

#[test]
fn criterion4_derivation_and_orbit_dimensions() {
    // J17 as stated
    assert_eq!(derivation_dimension(&resolve("J17")), 4, "dim Der(J17)");
    // parameterless algebras with a listed orbit dimension: 9 - dim Der
    let orbit9: &[(&str, usize)] = &[
        ("A04", 9),
        ("A12", 8),
        ("A29", 7),
        ("A30", 7),
        ("A16", 7),
        ("A32", 9),
        // the standard-variety figures
        ("A19_0", 7),
        ("A14_00", 3),
        ("A17(alpha=1/2)", 7),
        ("A19(alpha=1/2)", 7),
        ("A19(alpha=-1/2)", 7),
        ("A14(alpha=0, beta=1/2)", 5),
        ("A14(alpha=0, beta=-1/2)", 5),
        ("A14(alpha=1/2, beta=-1/2)", 5),
        ("A14(alpha=1/2, beta=1/2)", 3),
        ("A14(alpha=-1/2, beta=-1/2)", 3),
    ];
    for (spec, dim) in orbit9 {
        let a = resolve(spec);
        let got = 9 - derivation_dimension(&a);
        assert_eq!(got, *dim, "criterion 4: orbit dim of {spec}");
    }
    // families: one consistent convention, orbit dim + essential parameters
    let families: &[(&str, usize)] = &[("A02", 6), ("A17", 8), ("A19", 8), ("A24", 9)];
    for (name, dim) in families {
        let a = resolve(name);
        let got = 9 - derivation_dimension(&a) + a.params.len();
        assert_eq!(got, *dim, "criterion 4: family dim of {name}");
    }
    line(
        "criterion4/derivation-orbit-dimensions",
        true,
        &format!(
            "dim Der(J17) = 4; {} orbit figures and {} family figures match one convention",
            orbit9.len(),
            families.len()
        ),
    );
}

#[test]
fn criterion4_stated_value_der_j03() {
    // The stated value is dim Der(J03) = 3.  The verbatim J03 table gives a
    // fourth independent derivation (for example D(e1) = e2, D(e2) = 2 e4),
    // so this check is expected to stay red; the non-degeneration J17 -/-> J03
    // is unaffected because 4 < 4 already fails the strict-increase test.
    let got = derivation_dimension(&resolve("J03"));
    line(
        "criterion4/stated-value-der-J03",
        got == 3,
        &format!("dim Der(J03) = {got}, stated value 3"),
    );
    assert_eq!(
        got, 3,
        "criterion 4: dim Der(J03) = {got} contradicts the stated value 3; \
         the shipped table is verbatim and its derivation algebra is \
         four-dimensional (see the decisions ledger)"
    );
}

#[test]
fn criterion5_degeneration_witnesses() {
    let cat = catalog();
    assert!(
        cat.witnesses.len() >= 14,
        "criterion 5: expected at least 14 witnesses, found {}",
        cat.witnesses.len()
    );
    for w in &cat.witnesses {
        let src = cat.entry(&w.source).unwrap();
        let tgt = cat.entry(&w.target).unwrap();
        let rep = verify_degeneration(&src.algebra, &w.index, &w.basis, &tgt.algebra).unwrap();
        assert!(
            rep.pass,
            "criterion 5: witness {} ({} -> {}) failed: {:?}",
            w.id, w.source, w.target, rep.failures
        );
    }
    line(
        "criterion5/degeneration-witnesses",
        true,
        &format!(
            "{} parametrized bases verified, limits symbolic in target parameters",
            cat.witnesses.len()
        ),
    );
}

#[test]
fn criterion6_non_degeneration_evidence() {
    let cat = catalog();
    let mut memberships = 0usize;
    let mut violations = 0usize;
    for csf in &cat.closed_sets {
        for spec in &csf.sources {
            let a = cat.resolve(spec).unwrap();
            let v = in_closed_set(&a, &csf.set).unwrap();
            assert!(
                v.holds(),
                "criterion 6: source {spec} not in {}: {v}",
                csf.set.name
            );
            memberships += 1;
        }
        for spec in &csf.targets {
            let a = cat.resolve(spec).unwrap();
            let v = in_closed_set(&a, &csf.set).unwrap();
            assert!(
                !v.holds(),
                "criterion 6: target {spec} unexpectedly satisfies {}",
                csf.set.name
            );
            violations += 1;
        }
    }
    // sampling tier via the shared driver report (seed 0, 500 trials)
    let rep = full_report();
    let mut samples = 0usize;
    for l in &rep.lines {
        if l.section == "closedsets" && l.item.contains("/sample/") {
            assert_eq!(
                l.status,
                Status::Pass,
                "criterion 6: sampling found a representative: {}: {}",
                l.item,
                l.detail
            );
            samples += 1;
        }
    }
    assert!(samples > 0);
    line(
        "criterion6/non-degeneration-evidence",
        true,
        &format!(
            "{memberships} exact memberships, {violations} exact violations, \
             {samples} empty 500-trial samplings (seed 0)"
        ),
    );
}

fn aut_family(name: &str, entries: &[(usize, usize, &str)]) -> Matrix {
    let mut m = Matrix::zero(3, 3);
    for &(i, j, e) in entries {
        m.set(i - 1, j - 1, Scalar::parse(e).unwrap());
    }
    let _ = name;
    m
}

#[test]
fn criterion7_property_suites() {
    let cat = catalog();
    // (a) fuse(split(A)) = A on the whole corpus
    for e in cat.entries.values() {
        assert!(
            e.algebra.split().fuse().same_table(&e.algebra),
            "fuse-split identity fails for {}",
            e.algebra.name
        );
    }
    // (b) split(extend(J, theta)) = (J, theta) for every stored cocycle
    let mut splits = 0usize;
    for e in cat.entries.values() {
        let plus = e.claims.iter().find_map(|c| match c {
            Claim::PlusPart(p) => Some(p.clone()),
            _ => None,
        });
        let theta = e.claims.iter().find_map(|c| match c {
            Claim::CocycleCoords(t) => Some(t.clone()),
            _ => None,
        });
        let (Some(plus), Some(theta)) = (plus, theta) else {
            continue;
        };
        let j = cat.entry(&plus).unwrap().algebra.clone();
        let ext = extend(&j, &theta).unwrap();
        let pair = ext.split();
        assert!(pair.circ.same_table(&j));
        for l in 0..ext.dim {
            for m in 0..ext.dim {
                let got = pair.bracket.basis_product(l, m);
                let want = theta.on_basis(l, m);
                assert!(got.iter().zip(&want).all(|(a, b)| a.eq_scalar(b)));
            }
        }
        splits += 1;
    }
    assert_eq!(splits, 13);
    // (c) right-action law on the displayed symbolic automorphism families
    let families: Vec<(&str, Matrix, Matrix)> = vec![
        (
            "A01",
            aut_family(
                "phi",
                &[
                    (1, 1, "p11"),
                    (2, 1, "p21"),
                    (2, 2, "p11^2"),
                    (2, 3, "p23"),
                    (3, 1, "p31"),
                    (3, 3, "p33"),
                ],
            ),
            aut_family(
                "psi",
                &[
                    (1, 1, "q11"),
                    (2, 1, "q21"),
                    (2, 2, "q11^2"),
                    (2, 3, "q23"),
                    (3, 1, "q31"),
                    (3, 3, "q33"),
                ],
            ),
        ),
        (
            "A06",
            aut_family(
                "phi",
                &[
                    (1, 1, "1"),
                    (2, 2, "p22"),
                    (2, 3, "p23"),
                    (3, 2, "p32"),
                    (3, 3, "p33"),
                ],
            ),
            aut_family(
                "psi",
                &[
                    (1, 1, "1"),
                    (2, 2, "q22"),
                    (2, 3, "q23"),
                    (3, 2, "q32"),
                    (3, 3, "q33"),
                ],
            ),
        ),
        (
            "A10",
            aut_family(
                "phi",
                &[
                    (1, 1, "1"),
                    (2, 2, "p22"),
                    (2, 3, "p23"),
                    (3, 2, "p32"),
                    (3, 3, "p33"),
                ],
            ),
            aut_family(
                "psi",
                &[
                    (1, 1, "1"),
                    (2, 2, "q22"),
                    (2, 3, "q23"),
                    (3, 2, "q32"),
                    (3, 3, "q33"),
                ],
            ),
        ),
        (
            "A13_0",
            aut_family(
                "phi",
                &[(1, 1, "1"), (2, 1, "p21"), (2, 2, "p22"), (3, 3, "p33")],
            ),
            aut_family(
                "psi",
                &[(1, 1, "1"), (2, 1, "q21"), (2, 2, "q22"), (3, 3, "q33")],
            ),
        ),
        (
            "A18_0",
            aut_family(
                "phi",
                &[(1, 1, "1"), (2, 1, "p21"), (2, 2, "p22"), (3, 3, "p33")],
            ),
            aut_family(
                "psi",
                &[(1, 1, "1"), (2, 1, "q21"), (2, 2, "q22"), (3, 3, "q33")],
            ),
        ),
        (
            "A19_0",
            aut_family(
                "phi",
                &[(1, 1, "1"), (2, 2, "1"), (3, 1, "p31"), (3, 3, "p33")],
            ),
            aut_family(
                "psi",
                &[(1, 1, "1"), (2, 2, "1"), (3, 1, "q31"), (3, 3, "q33")],
            ),
        ),
        (
            "A17_0",
            aut_family(
                "phi",
                &[
                    (1, 1, "1"),
                    (2, 2, "1"),
                    (3, 1, "p31"),
                    (3, 2, "-p31"),
                    (3, 3, "p33"),
                ],
            ),
            aut_family(
                "psi",
                &[
                    (1, 1, "1"),
                    (2, 2, "1"),
                    (3, 1, "q31"),
                    (3, 2, "-q31"),
                    (3, 3, "q33"),
                ],
            ),
        ),
        (
            "A14_00",
            aut_family(
                "phi",
                &[
                    (1, 1, "1"),
                    (2, 1, "p21"),
                    (2, 2, "p22"),
                    (2, 3, "p23"),
                    (3, 1, "p31"),
                    (3, 2, "p32"),
                    (3, 3, "p33"),
                ],
            ),
            // a fixed rational member keeps the composite inverse small
            aut_family(
                "psi",
                &[
                    (1, 1, "1"),
                    (2, 1, "2"),
                    (2, 2, "1"),
                    (2, 3, "3"),
                    (3, 1, "1"),
                    (3, 2, "1"),
                    (3, 3, "4"),
                ],
            ),
        ),
    ];
    for (name, phi, psi) in &families {
        let j = resolve(name);
        assert!(
            verify_automorphism(&j, phi).unwrap().holds(),
            "{name}: phi shape is not an automorphism family"
        );
        assert!(verify_automorphism(&j, psi).unwrap().holds());
        let space = z2_basis(&j).unwrap();
        if space.generic_dimension == 0 {
            continue;
        }
        // generic symbolic cocycle in the Z2 basis
        let n = j.dim;
        let mut mats = vec![Matrix::zero(n, n); n];
        for (i, theta) in space.basis.iter().enumerate() {
            let s = Scalar::param(&format!("s{}", i + 1));
            for m in 0..n {
                mats[m] = mats[m].add(&theta.component(m).scale(&s)).unwrap();
            }
        }
        let theta = Cocycle::new(mats).unwrap();
        assert!(is_cocycle(&j, &theta));
        let moved = act(&theta, phi).unwrap();
        assert!(
            is_cocycle(&j, &moved),
            "{name}: cocycle space not closed under the action"
        );
        let lhs = act(&moved, psi).unwrap();
        let rhs = act(&theta, &phi.mul(psi).unwrap()).unwrap();
        assert!(
            lhs.eq_cocycle(&rhs),
            "{name}: right-action law fails symbolically"
        );
    }
    // (d) flexibility of A is equivalent to the compatibility identity on
    //     the split pair, over the whole corpus
    for e in cat.entries.values() {
        let flex = check_identity_alg(&e.algebra, IdentityName::Flexible).holds();
        let pair = e.algebra.split();
        let compat = algtool::identities::check_identity(
            algtool::identities::CheckTarget::Pair(&pair),
            IdentityName::GenericPoissonCompat,
        )
        .holds();
        assert_eq!(flex, compat, "flexible <=> compat fails for {}", e.algebra.name);
    }
    // (e) fingerprint invariance under 50 random rational basis changes
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_invertible = |n: usize| loop {
        let mut rows = vec![vec![Scalar::zero(); n]; n];
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                *x = Scalar::from_rat(algtool::scalar::rat(rng.gen_range(-5..=5), 1));
            }
        }
        let m = Matrix::from_rows(rows).unwrap();
        if !algtool::linalg::determinant(&m).unwrap().is_zero() {
            return m;
        }
    };
    let mut moved_checks = 0usize;
    for e in cat.entries.values() {
        let base = invariant_fingerprint(&e.algebra);
        for _ in 0..50 {
            let m = random_invertible(e.algebra.dim);
            let moved = e.algebra.change_of_basis(&m).unwrap();
            assert_eq!(
                invariant_fingerprint(&moved),
                base,
                "fingerprint not invariant for {}",
                e.algebra.name
            );
            moved_checks += 1;
        }
    }
    // (f) dim Der grows along every verified witness: strictly for a fixed
    //     source, non-strictly when a parametrized index makes the source a
    //     t-family
    for w in &cat.witnesses {
        let ds = derivation_dimension(&cat.entry(&w.source).unwrap().algebra);
        let dt = derivation_dimension(&cat.entry(&w.target).unwrap().algebra);
        let indexed = w.index.values().any(|s| {
            s.num().contains_var(degeneration::T) || s.den().contains_var(degeneration::T)
        });
        if indexed {
            assert!(ds <= dt, "{}: Der must not drop", w.id);
        } else {
            assert!(ds < dt, "{}: Der must strictly increase", w.id);
        }
    }
    line(
        "criterion7/property-suites",
        true,
        &format!(
            "fuse-split on {} entries; 13 split-extend roundtrips; right-action law on {} \
             automorphism families; flexibility<=>compatibility corpus-wide; {} fingerprint \
             invariance checks; Der monotone along all witnesses",
            cat.entries.len(),
            families.len(),
            moved_checks
        ),
    );
}

#[test]
fn criterion8_isomorphism_footers() {
    let cat = catalog();
    let expected = [
        ("iso_a02", "A02"),
        ("iso_a14", "A14"),
        ("iso_a17", "A17"),
        ("iso_a22", "A22"),
        ("iso_a24", "A24"),
    ];
    for (id, src) in expected {
        let w = cat
            .isos
            .iter()
            .find(|w| w.id == id)
            .unwrap_or_else(|| panic!("criterion 8: witness {id} missing"));
        assert_eq!(w.source.name, src);
        let s = cat.resolve(&w.source).unwrap();
        let t = cat
            .entry(&w.target.name)
            .and_then(|e| e.algebra.substitute(&w.target.bindings))
            .unwrap();
        let v = verify_isomorphism(&s, &t, &w.matrix).unwrap();
        assert!(v.holds(), "criterion 8: {id} fails: {v}");
    }
    line(
        "criterion8/isomorphism-footers",
        true,
        "A02^a ~ A02^-a, A14^{a,b} ~ A14^{b,a}, A17^a ~ A17^-a, A22^a ~ A22^{1/a}, \
         A24^a ~ A24^{1/a} all hold symbolically over Q(a)",
    );
}

#[test]
fn headline_cardinalities() {
    // the classification counts are verified as catalog cardinality checks
    let rep = full_report();
    for l in &rep.lines {
        if l.section == "counts" {
            assert_eq!(l.status, Status::Pass, "counts/{}: {}", l.item, l.detail);
        }
    }
    line("headline-cardinalities", true, "all corpus counts match");
}

#[test]
fn golden_report_is_reproduced() {
    let golden_path = catalog_dir().join("golden_report.txt");
    let golden = std::fs::read_to_string(&golden_path).expect("golden report present");
    let rep = full_report();
    let text = rep.render_text();
    assert_eq!(
        text, golden,
        "regenerated report differs from the golden report; \
         regenerate with `algtool catalog verify catalog > catalog/golden_report.txt`"
    );
    assert_eq!(rep.failed(), 0, "golden run contains failures");
    line(
        "golden-report",
        true,
        &format!(
            "byte-identical report: {} pass, {} undecided, 0 fail",
            rep.passed(),
            rep.undecided()
        ),
    );
}

#[test]
fn sampling_is_seed_reproducible() {
    // same seed, same outcome; the report embeds the seed
    let cat = catalog();
    let csf = cat
        .closed_sets
        .iter()
        .find(|c| c.set.name == "r_geo1")
        .unwrap();
    let a = cat
        .resolve(&NameSpec {
            name: "A02".into(),
            bindings: BTreeMap::from([("alpha".to_string(), Scalar::from_int(2))]),
            basis: None,
        })
        .unwrap();
    let r1 = borel_sample_against_set(&a, &csf.set, 100, 42).unwrap();
    let r2 = borel_sample_against_set(&a, &csf.set, 100, 42).unwrap();
    assert_eq!(r1.found_at, r2.found_at);
    assert_eq!(r1.seed, 42);
    assert_eq!(r1.found_at, None);
}
