mod common;

use common::{case, fixtures, CORPUS};
use galcover::coset::Verdict;
use galcover::pipeline::{
    analyze, caff_probe, load_corpus, run_corpus, run_fixture, CaffClass, CaseFixture, Options, ProbeElement, ProbeVerdict,
};
use galcover::vankampen::generator_names;

fn corpus() -> Vec<CaseFixture> {
    load_corpus(fixtures().join("corpus")).unwrap()
}

#[test]
fn shipped_corpus_passes() {
    let s = run_corpus(&corpus(), &Options::default());
    assert_eq!(s.results.len(), CORPUS.len());
    println!("{s}");
    assert!(s.passed(), "{s}");
    assert_eq!(s.exit_code(), 0);
}

#[test]
fn corrupted_expectation_fails_alone() {
    let mut fx = corpus();
    let target = fx.iter().position(|f| f.case.contains("quartic-three-point")).unwrap();
    fx[target].expect.kernel = Some("Z/2".parse().unwrap());
    let s = run_corpus(&fx[target..=target], &Options::default());
    assert!(!s.passed());
    assert_eq!(s.exit_code(), 1);
    let bad: Vec<_> = s.results[0].checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert_eq!(bad, ["kernel"]);

    let others: Vec<_> = fx.iter().filter(|f| f.case.contains("quartic") || f.case.contains("quadric")).cloned().collect();
    let s = run_corpus(&others, &Options::default());
    let failed: Vec<_> = s.results.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
    assert_eq!(failed, ["quartic-three-point"]);
}

#[test]
fn empty_corpus_succeeds() {
    let dir = std::env::temp_dir().join(format!("galcover-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fx = load_corpus(&dir).unwrap();
    let s = run_corpus(&fx, &Options::default());
    assert!(s.results.is_empty());
    assert_eq!(s.exit_code(), 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_consistent_and_deterministic() {
    for name in ["quartic-three-point", "cayley-type-2", "veronese-plus-plane"] {
        let d = case(name);
        let a = analyze(&d, &Options::default()).unwrap();
        let b = analyze(&d, &Options::default()).unwrap();
        assert!(a.is_consistent(), "{name}");
        assert!(a.affine_surjects(), "{name}");
        let strip = |r: &galcover::AnalysisReport| {
            let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
            v.as_object_mut().unwrap().remove("timings_ms");
            v
        };
        assert_eq!(strip(&a), strip(&b), "{name}");
        assert_eq!(matches!(a.verdict, Verdict::IsoSymmetric { .. }), a.kernel.invariants.is_trivial());
    }
}

#[test]
fn json_mirrors_text() {
    let r = analyze(&case("cayley-type-2"), &Options::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let text = r.to_string();
    assert_eq!(v["case"], "cayley-type-2");
    assert!(text.contains(v["kernel"]["invariants"].as_str().unwrap()));
    assert!(text.contains(&format!("{} generators", v["generators"])));
    for n in v["notes"].as_array().unwrap() {
        assert!(text.contains(n.as_str().unwrap()));
    }
}

#[test]
fn extrapolation_note() {
    let shipped = analyze(&case("quartic-three-point"), &Options::default()).unwrap();
    assert!(!shipped.notes.iter().any(|n| n.contains("extrapolation")));
    let mut d = case("quartic-three-point");
    d.name = "relabelled".into();
    d.vertices.swap(0, 1);
    d.vertices[0].id = 1;
    d.vertices[1].id = 2;
    let r = analyze(&d, &Options::default()).unwrap();
    assert!(r.notes.iter().any(|n| n.contains("extrapolation")));
}

#[test]
fn small_enumeration_limit_is_inconclusive() {
    let mut opts = Options::default();
    opts.limits.max_cosets = 60;
    let r = analyze(&case("quintic-four-point-fan"), &opts).unwrap();
    assert!(matches!(r.verdict, Verdict::Inconclusive { .. }), "{}", r.verdict);
    assert_eq!(r.exit_code(), 2);
}

fn probe(case_name: &str, element: &str) -> galcover::pipeline::CaffProbe {
    let d = case(case_name);
    let e = ProbeElement::parse(element, &generator_names(d.m())).unwrap();
    caff_probe(&d, &[e]).unwrap().remove(0)
}

#[test]
fn probe_examples() {
    let p = probe("cayley-type-2", "[g3 g4 g3, g2^-1]");
    assert_eq!(p.classification, CaffClass::DisjointCommutator);
    assert_eq!(p.images, Some(("(2 4)".into(), "(1 3)".into())));
    assert_eq!(p.verdict, ProbeVerdict::Nontrivial);
    let (_, alt) = p.conjugation_reading.as_ref().unwrap();
    assert_eq!(*alt, ProbeVerdict::Nontrivial);

    assert_eq!(probe("cayley-type-2", "e").verdict, ProbeVerdict::InconclusiveZero);
    for name in ["cayley-type-1", "quintic-five-point", "veronese-plus-plane"] {
        assert_eq!(probe(name, "g1 g2").verdict, ProbeVerdict::NotInKernel, "{name}");
    }
}

#[test]
fn probe_classifies_triples() {
    // lines 1 and 4 of this case meet in plane 2
    let p = probe("cayley-type-2", "<g1, g4>");
    assert_eq!(p.classification, CaffClass::OneLetterTriple);
    let p = probe("cayley-type-2", "<g1, g5>");
    assert!(matches!(p.classification, CaffClass::Unclassified(_)));
    let p = probe("cayley-type-2", "g1 g1p^-1");
    assert!(matches!(p.classification, CaffClass::Unclassified(_)));
}

#[test]
fn affine_kernels_of_trivial_cases() {
    let fx: Vec<_> = corpus().into_iter().filter(|f| f.case.contains("quartic-three-point")).collect();
    let r = run_fixture(&fx[0], &Options::default());
    let report = r.report.unwrap();
    assert!(report.affine_kernel.invariants.is_trivial());
    assert_eq!(report.kernel.index, 24);
}
