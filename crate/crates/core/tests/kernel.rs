mod common;

use common::{case, pres};
use galcover::coset::table_from_hom;
use galcover::fpgroup::{add_square_relators, tietze_simplify, Permutation, PermutationHom, Presentation, Word};
use galcover::kernel::{
    abelianization, element_image, reidemeister_schreier, smith_normal_form, AbelianInvariants, IntegerMatrix,
};
use galcover::vankampen::generate;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big(x: i128) -> BigInt {
    BigInt::from(x)
}

#[test]
fn smith_form_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let bound = if trial % 3 == 0 { 2 } else { 9 };
        let a: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let m = IntegerMatrix::from_rows(&a);
        let f = smith_normal_form(&m);
        assert_eq!(f.u.mul(&m).mul(&f.v), f.s, "trial {trial}: {a:?}");
        assert!(f.u.determinant().abs() == BigInt::from(1), "U not unimodular for {a:?}");
        assert!(f.v.determinant().abs() == BigInt::from(1), "V not unimodular for {a:?}");
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    assert!(f.s.get(i, j).is_zero());
                }
            }
        }
        let diag = f.s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "{diag:?}");
            }
        }
        // d_k = s_1 ... s_k
        let dd = common::determinantal_divisors(&a);
        let mut prod = BigInt::from(1);
        for (k, d) in dd.iter().enumerate() {
            prod *= &diag[k];
            assert_eq!(prod, big(*d), "trial {trial}: {a:?} diag {diag:?}");
        }
    }
}

fn schreier_rank_case(g: usize, images: Vec<Permutation>, degree: usize) {
    let p = Presentation::with_generators(g);
    let h = PermutationHom::new(degree, images);
    let t = table_from_hom(&p, &h).unwrap();
    let i = t.len();
    let kd = reidemeister_schreier(&p, &t).unwrap();
    let rank = i * (g - 1) + 1;
    assert_eq!(kd.presentation.ngens(), rank, "index {i}, {g} generators");
    assert!(kd.presentation.relators.is_empty());
    assert_eq!(abelianization(&kd.presentation), AbelianInvariants::free(rank));
}

fn rotation(n: usize, k: usize) -> Permutation {
    Permutation::from_images((0..n).map(|x| ((x + k) % n) as u32).collect()).unwrap()
}

#[test]
fn schreier_rank_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in 1..=4 {
        for i in 1..=24 {
            // cyclic images: the regular action of Z/i
            let mut imgs = vec![rotation(i, 1)];
            imgs.extend((1..g).map(|_| rotation(i, rng.gen_range(0..i))));
            schreier_rank_case(g, imgs, i);
        }
        if g >= 2 {
            for n in 3..=4 {
                // S_3, S_4 through a transposition and an n-cycle
                let mut imgs = vec![Permutation::transposition(n, 1, 2), rotation(n, 1)];
                imgs.extend((2..g).map(|_| Permutation::identity(n)));
                schreier_rank_case(g, imgs, n);
            }
        }
    }
}

#[test]
fn pure_braid_group_abelianization() {
    // B_3 onto S_3; the kernel is P_3 with H_1 = Z^3
    let p = pres(&["a", "b"], &["a b a b^-1 a^-1 b^-1"]);
    let h = PermutationHom::new(3, vec![Permutation::transposition(3, 1, 2), Permutation::transposition(3, 2, 3)]);
    let t = table_from_hom(&p, &h).unwrap();
    let kd = reidemeister_schreier(&p, &t).unwrap();
    assert_eq!(kd.abelianization_map().invariants, AbelianInvariants::free(3));
    // a^2 is a generator of P_3
    let a2 = p.parse_word("a^2").unwrap();
    let v = element_image(&a2, &kd).unwrap();
    assert!(!v.is_zero());
    assert!(element_image(&p.parse_word("a").unwrap(), &kd).is_err());
}

#[test]
fn infinite_dihedral_kernel() {
    let p = pres(&["a", "b"], &["a^2", "b^2"]);
    let h = PermutationHom::new(2, vec![Permutation::transposition(2, 1, 2); 2]);
    let t = table_from_hom(&p, &h).unwrap();
    let kd = reidemeister_schreier(&p, &t).unwrap();
    assert_eq!(kd.abelianization_map().invariants, AbelianInvariants::free(1));
    let ab = p.parse_word("a b").unwrap();
    let x = element_image(&ab, &kd).unwrap();
    let x3 = element_image(&ab.pow(3), &kd).unwrap();
    assert_eq!(x3.free[0], &x.free[0] * 3);
}

fn shuffled(p: &Presentation, rng: &mut ChaCha8Rng) -> Presentation {
    let mut rels: Vec<Word> = p
        .relators
        .iter()
        .map(|r| {
            let r = if rng.gen_bool(0.5) { r.inverse() } else { r.clone() };
            let k = rng.gen_range(0..r.len().max(1));
            Word::new(r.letters()[k..].iter().chain(&r.letters()[..k]).copied().collect())
        })
        .collect();
    rels.shuffle(rng);
    Presentation::new(p.names.clone(), rels)
}

#[test]
fn abelianization_ignores_relator_order_and_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["cayley-type-2", "veronese-plus-plane", "quartic-three-point"] {
        let gp = generate(&case(name), true).unwrap();
        let sq = add_square_relators(&gp.presentation);
        let t = table_from_hom(&sq, &gp.image.hom()).unwrap();
        let kd = reidemeister_schreier(&sq, &t).unwrap();
        let base = abelianization(&kd.presentation);
        for _ in 0..3 {
            assert_eq!(abelianization(&shuffled(&kd.presentation, &mut rng)), base, "{name}");
        }
        let simple = tietze_simplify(&kd.presentation, 10_000);
        assert!(!simple.budget_exhausted);
        assert_eq!(abelianization(&simple.presentation), base, "{name}");
    }
}

#[test]
fn tietze_rewrite_preserves_element_images() {
    let gp = generate(&case("cayley-type-2"), false).unwrap();
    let sq = add_square_relators(&gp.presentation);
    let t = table_from_hom(&sq, &gp.image.hom()).unwrap();
    let kd = reidemeister_schreier(&sq, &t).unwrap();
    let simple = tietze_simplify(&kd.presentation, 10_000);
    let m = galcover::kernel::AbelianizationMap::new(&simple.presentation);
    let w = sq.parse_word("[g3 g4 g3, g2^-1]").unwrap();
    let k = kd.rewrite(&w).unwrap();
    let direct = kd.abelianization_map().image(&k);
    let via = m.image(&simple.rewrite(&k));
    assert_eq!(direct.is_zero(), via.is_zero());
}

fn arb_word(ngens: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..ngens, any::<bool>()), 0..max)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, i)| galcover::fpgroup::Letter::new(g, i)).collect()))
}

fn arb_presentation() -> impl Strategy<Value = Presentation> {
    (1usize..5).prop_flat_map(|n| {
        prop::collection::vec(arb_word(n, 9), 0..6).prop_map(move |rels| Presentation::new(Presentation::with_generators(n).names, rels))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tietze_preserves_abelianization(p in arb_presentation()) {
        let t = tietze_simplify(&p, 1000);
        prop_assert_eq!(abelianization(&t.presentation), abelianization(&p));
        prop_assert!(t.presentation.ngens() <= p.ngens());
    }

    #[test]
    fn shuffle_preserves_abelianization(p in arb_presentation(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(abelianization(&shuffled(&p, &mut rng)), abelianization(&p));
    }

    #[test]
    fn tietze_definitions_hold(p in arb_presentation()) {
        // each eliminated generator equals its definition in the abelianization
        let t = tietze_simplify(&p, 1000);
        let m = galcover::kernel::AbelianizationMap::new(&t.presentation);
        for (g, def) in &t.eliminated {
            let lhs = m.image(&t.rewrite(&Word::gen(*g)));
            let rhs = m.image(&t.rewrite(def));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
