#![allow(dead_code)]

use std::path::PathBuf;

use galcover::fpgroup::{parse_word, Letter, Permutation, Presentation, Word};
use galcover::CosetTable;
use num_integer::Integer;
use galcover::pipeline::shipped_case;
use galcover::PlanarDegeneration;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn case(name: &str) -> PlanarDegeneration {
    shipped_case(name).unwrap_or_else(|| panic!("no shipped case {name}"))
}

/// Cases with expected relator data.
pub const CORPUS: &[&str] = &[
    "quadric-plus-plane",
    "veronese-plus-plane",
    "cayley-type-1",
    "cayley-type-2",
    "quartic-four-point-plus-plane",
    "quintic-five-point",
    "quintic-four-point-fan",
    "quartic-three-point",
];

pub fn pres(names: &[&str], rels: &[&str]) -> Presentation {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let rels = rels.iter().map(|r| parse_word(r, &names).unwrap()).collect();
    Presentation::new(names, rels)
}

/// Cofactor expansion, independent of the library's elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Determinantal divisors: gcd of all k x k minors.
pub fn determinantal_divisors(a: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (a.len(), a[0].len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0i128;
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let m: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j] as i128).collect()).collect();
                    g = g.gcd(&det(&m));
                }
            }
            g
        })
        .collect()
}

/// Coset representatives by BFS over a closed table.
pub fn transversal(t: &CosetTable) -> Vec<Word> {
    let mut reps: Vec<Option<Word>> = vec![None; t.len()];
    reps[0] = Some(Word::identity());
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(c) = queue.pop_front() {
        for g in 0..t.ngens() {
            for l in [Letter::pos(g), Letter::neg(g)] {
                let d = t.act_letter(c, l);
                if reps[d].is_none() {
                    reps[d] = Some(reps[c].as_ref().unwrap().concat(&Word::new(vec![l])));
                    queue.push_back(d);
                }
            }
        }
    }
    reps.into_iter().map(Option::unwrap).collect()
}

/// Schreier generators of the stabilizer of coset 0, as words.
pub fn stabilizer_words(t: &CosetTable) -> Vec<Word> {
    let reps = transversal(t);
    let mut sub = Vec::new();
    for (c, u) in reps.iter().enumerate() {
        for g in 0..t.ngens() {
            let d = t.act_letter(c, Letter::pos(g));
            let w = u.concat(&Word::gen(g)).concat(&reps[d].inverse());
            if !w.is_empty() {
                sub.push(w);
            }
        }
    }
    sub
}

/// Generator permutations after BFS renumbering; equal iff the actions are
/// isomorphic as pointed actions.
pub fn action(t: &CosetTable) -> Vec<Permutation> {
    let t = t.standardized();
    (0..t.ngens()).map(|g| t.generator_permutation(g)).collect()
}
