mod common;

use common::{case, CORPUS};
use galcover::degen::{self, VertexKind};
use galcover::fpgroup::Permutation;
use galcover::vankampen::{self, generate, schema, GenerateError, Provenance, TemplateForm};

fn common_letters(a: &Permutation, b: &Permutation) -> usize {
    a.support().intersection(&b.support()).count()
}

#[test]
fn every_relator_maps_to_identity() {
    for name in CORPUS.iter().chain(["hirzebruch-strip"].iter()) {
        for projective in [true, false] {
            let gp = generate(&case(name), projective).unwrap();
            let h = gp.image.hom();
            for (r, prov) in gp.presentation.relators.iter().zip(&gp.provenance) {
                assert!(h.eval(r).is_identity(), "{name} {prov}: {}", r.display(&gp.presentation.names));
            }
        }
    }
}

#[test]
fn parasitic_pairs_map_to_disjoint_transpositions() {
    for name in CORPUS {
        let d = case(name);
        for (a, b) in degen::parasitic_pairs(&d) {
            let (ta, tb) = (degen::edge_transposition(&d, a).unwrap(), degen::edge_transposition(&d, b).unwrap());
            assert_eq!(common_letters(&ta, &tb), 0, "{name}: lines {a} {b}");
        }
    }
}

#[test]
fn cusp_brackets_share_one_letter_and_commutator_brackets_commute() {
    for name in CORPUS {
        let gp = generate(&case(name), true).unwrap();
        let h = gp.image.hom();
        let mut triples = 0;
        for (br, prov) in gp.brackets.iter().zip(&gp.provenance) {
            let Some((form, x, y)) = br else { continue };
            let (px, py) = (h.eval(x), h.eval(y));
            assert!(px.is_transposition() && py.is_transposition(), "{name} {prov}");
            match form {
                TemplateForm::Triple => {
                    triples += 1;
                    assert_eq!(common_letters(&px, &py), 1, "{name} {prov}: {px} {py}");
                }
                TemplateForm::Commutator => {
                    assert!(common_letters(&px, &py) == 0 || px == py, "{name} {prov}: {px} {py}")
                }
            }
        }
        assert!(triples > 0, "{name}");
    }
}

#[test]
fn projective_relator_is_last_and_maps_to_identity() {
    for name in CORPUS {
        let gp = generate(&case(name), true).unwrap();
        assert_eq!(gp.provenance.last(), Some(&Provenance::Projective));
        let m = case(name).m();
        assert!(gp.image.hom().eval(&vankampen::projective_relator(m)).is_identity());
        let affine = generate(&case(name), false).unwrap();
        assert_eq!(affine.presentation.relators.len() + 1, gp.presentation.relators.len());
        assert!(!affine.provenance.contains(&Provenance::Projective));
    }
}

#[test]
fn generator_count_is_twice_the_lines() {
    for name in CORPUS {
        let d = case(name);
        let gp = generate(&d, true).unwrap();
        assert_eq!(gp.presentation.ngens(), 2 * d.m());
        assert_eq!(gp.presentation.names[1], "g1p");
    }
}

#[test]
fn parasitic_relators_are_commutators_of_each_copy() {
    let d = case("quintic-four-point-fan");
    let gp = generate(&d, false).unwrap();
    let par = degen::parasitic_pairs(&d).len();
    let n = gp.provenance.iter().filter(|p| matches!(p, Provenance::Parasitic(..))).count();
    assert_eq!(n, 4 * par);
}

#[test]
fn generation_is_deterministic() {
    for name in CORPUS {
        let a = generate(&case(name), true).unwrap().dump();
        let b = generate(&case(name), true).unwrap().dump();
        assert_eq!(a, b);
    }
}

#[test]
fn wrong_slot_count_is_an_error() {
    let s = schema(VertexKind::ThreePointCayley);
    assert!(matches!(s.instantiate(&[1, 2]), Err(GenerateError::RoleArityMismatch { .. })));
    assert_eq!(s.instantiate(&[1, 2, 3]).unwrap().len(), s.templates.len());
}

#[test]
fn invalid_case_is_rejected() {
    let mut d = case("quartic-three-point");
    d.edges[0].planes = vec![1, 1];
    assert!(matches!(generate(&d, true), Err(GenerateError::Invalid(_))));
}

#[test]
fn dump_parses_back() {
    for name in CORPUS {
        let gp = generate(&case(name), true).unwrap();
        let p = galcover::Presentation::parse(&gp.dump()).unwrap();
        assert_eq!(p, gp.presentation, "{name}");
    }
}
