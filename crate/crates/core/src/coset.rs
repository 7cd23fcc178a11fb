//! Coset tables: Todd-Coxeter enumeration and tables read off permutation actions.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fpgroup::{Letter, Permutation, PermutationHom, Presentation, Word};
use crate::kernel::{self, AbelianInvariants};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupTag {
    /// Generated by the listed words.
    Words(Vec<Word>),
    /// Kernel of a permutation representation.
    Kernel,
}

/// A closed coset table. Column `2g` is `g`, column `2g+1` is `g^-1`;
/// coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    data: Vec<u32>,
    pub subgroup: SubgroupTag,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        if self.ngens == 0 {
            1
        } else {
            self.data.len() / (2 * self.ngens)
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Coset reached from `c` by `l`.
    pub fn act_letter(&self, c: usize, l: Letter) -> usize {
        self.data[c * 2 * self.ngens + l.column()] as usize
    }

    pub fn act(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.act_letter(c, l))
    }

    /// Permutation of the cosets induced by generator `g`.
    pub fn generator_permutation(&self, g: usize) -> Permutation {
        Permutation::from_images((0..self.len()).map(|c| self.act_letter(c, Letter::pos(g)) as u32).collect())
            .expect("closed table columns are permutations")
    }

    /// Every invariant of a completed table for `p`.
    pub fn is_valid_for(&self, p: &Presentation) -> bool {
        if p.ngens() != self.ngens {
            return false;
        }
        let n = self.len();
        for c in 0..n {
            for g in 0..self.ngens {
                let d = self.act_letter(c, Letter::pos(g));
                if d >= n || self.act_letter(d, Letter::neg(g)) != c {
                    return false;
                }
            }
        }
        if !(0..n).all(|c| p.relators.iter().all(|r| self.act(c, r) == c)) {
            return false;
        }
        match &self.subgroup {
            SubgroupTag::Words(ws) => ws.iter().all(|w| self.act(0, w) == 0),
            SubgroupTag::Kernel => true,
        }
    }

    /// Renumber cosets in breadth-first order from coset 0, scanning columns
    /// in order. Two tables give the same action up to relabeling iff their
    /// standardized forms are equal.
    pub fn standardized(&self) -> CosetTable {
        let n = self.len();
        let cols = 2 * self.ngens;
        let mut order = vec![NONE; n];
        let mut seq = vec![0usize];
        order[0] = 0;
        let mut i = 0;
        while i < seq.len() {
            let c = seq[i];
            for x in 0..cols {
                let d = self.data[c * cols + x] as usize;
                if order[d] == NONE {
                    order[d] = seq.len() as u32;
                    seq.push(d);
                }
            }
            i += 1;
        }
        let mut data = vec![0; n * cols];
        for (new, &old) in seq.iter().enumerate() {
            for x in 0..cols {
                data[new * cols + x] = order[self.data[old * cols + x] as usize];
            }
        }
        CosetTable { ngens: self.ngens, data, subgroup: self.subgroup.clone() }
    }

    /// Header line, then one row per coset listing the images under each
    /// generator and inverse (1-based).
    pub fn dump(&self, names: &[String]) -> String {
        let mut s = format!("cosets {}\ncolumns", self.len());
        for n in names {
            s.push_str(&format!(" {n} {n}^-1"));
        }
        s.push('\n');
        if let SubgroupTag::Words(ws) = &self.subgroup {
            for w in ws {
                s.push_str(&format!("subgroup {}\n", w.display(names)));
            }
        }
        let cols = 2 * self.ngens;
        for c in 0..self.len() {
            let row: Vec<String> = (0..cols).map(|x| (self.data[c * cols + x] + 1).to_string()).collect();
            s.push_str(&format!("{}: {}\n", c + 1, row.join(" ")));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    /// Run a lookahead pass before giving up when the table is full.
    pub lookahead: bool,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_cosets: 1_000_000, lookahead: true }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset limit {max} exceeded (inconclusive)")]
    Overflow { max: usize },
    #[error("relator {0} does not map to the identity")]
    InconsistentHom(usize),
    #[error("image has order {order}, not {expected}")]
    NonSurjective { order: usize, expected: usize },
}

struct Enumerator<'a> {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max: usize,
    rels: &'a [Vec<usize>],
    queue: VecDeque<u32>,
}

impl<'a> Enumerator<'a> {
    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.cols + x] = d;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn new_coset(&mut self) -> Option<u32> {
        if self.rows() >= self.max {
            return None;
        }
        let c = self.rows() as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.parent.push(c);
        self.live += 1;
        Some(c)
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        match self.new_coset() {
            Some(d) => {
                self.set(c, x, d);
                self.set(d, x ^ 1, c);
                true
            }
            None => false,
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push_back(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                if self.get(f, x ^ 1) == e {
                    self.set(f, x ^ 1, NONE);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != NONE {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != NONE {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    /// Trace `rel` from `c` in both directions, closing a single gap by
    /// deduction. With `fill`, gaps of more than one letter are bridged by
    /// defining cosets. Returns false if the table is full.
    fn scan(&mut self, c: u32, rel: &[usize], fill: bool) -> bool {
        if rel.is_empty() {
            return true;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = rel.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                let d = self.get(f, rel[i]);
                if d == NONE {
                    break;
                }
                f = d;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i as isize {
                let d = self.get(b, rel[j as usize] ^ 1);
                if d == NONE {
                    break;
                }
                b = d;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            }
            if j == i as isize {
                self.set(f, rel[i], b);
                self.set(b, rel[i] ^ 1, f);
                return true;
            }
            if !fill {
                return true;
            }
            if !self.define(f, rel[i]) {
                return false;
            }
        }
    }

    fn lookahead(&mut self, subgroup: &[Vec<usize>]) {
        for s in subgroup {
            if self.alive(0) {
                self.scan(0, s, false);
            }
        }
        let mut c = 0;
        while c < self.rows() as u32 {
            for r in self.rels {
                if !self.alive(c) {
                    break;
                }
                self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Drop dead rows, keeping the relative order of live ones.
    fn compact(&mut self) {
        let n = self.rows();
        let mut newid = vec![NONE; n];
        let mut k = 0u32;
        for (c, id) in newid.iter_mut().enumerate() {
            if self.parent[c] == c as u32 {
                *id = k;
                k += 1;
            }
        }
        let mut table = Vec::with_capacity(k as usize * self.cols);
        for c in 0..n {
            if newid[c] == NONE {
                continue;
            }
            for x in 0..self.cols {
                let d = self.table[c * self.cols + x];
                table.push(if d == NONE { NONE } else { newid[d as usize] });
            }
        }
        self.table = table;
        self.parent = (0..k).collect();
        self.live = k as usize;
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.column()).collect()
}

/// Enumerate the cosets of the subgroup generated by `subgroup` in the group
/// presented by `p`, HLT style: each coset in turn is scanned against every
/// relator, defining cosets to fill gaps. When the table is full a lookahead
/// pass and compaction run; if no room is gained the result is `Overflow`.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], lim: EnumerationLimits) -> Result<CosetTable, CosetError> {
    let ngens = p.ngens();
    if ngens == 0 {
        return Ok(CosetTable { ngens, data: Vec::new(), subgroup: SubgroupTag::Words(subgroup.to_vec()) });
    }
    let rels: Vec<Vec<usize>> = p.relators.iter().map(columns).collect();
    let subs: Vec<Vec<usize>> = subgroup.iter().map(|w| columns(&w.cyclically_reduced())).collect();
    let overflow = CosetError::Overflow { max: lim.max_cosets };
    let mut e = Enumerator {
        cols: 2 * ngens,
        table: Vec::new(),
        parent: Vec::new(),
        live: 0,
        max: lim.max_cosets.max(1),
        rels: &rels,
        queue: VecDeque::new(),
    };
    e.new_coset();

    // the subgroup generators may need room too; retry after lookahead
    let mut c: u32 = 0;
    let mut subgroup_done = false;
    while (c as usize) < e.rows() {
        let mut full = false;
        if !subgroup_done {
            for s in &subs {
                if !e.scan(0, s, true) {
                    full = true;
                    break;
                }
            }
            subgroup_done = !full;
        }
        if !full && e.alive(c) {
            for r in &rels {
                if !e.alive(c) {
                    break;
                }
                if !e.scan(c, r, true) {
                    full = true;
                    break;
                }
            }
            if !full {
                for x in 0..e.cols {
                    if !e.alive(c) {
                        break;
                    }
                    if e.get(c, x) == NONE && !e.define(c, x) {
                        full = true;
                        break;
                    }
                }
            }
        }
        if full {
            if !lim.lookahead {
                return Err(overflow);
            }
            let before = e.rows();
            e.lookahead(&subs);
            // renumber; `c` moves to the number of live cosets before it
            let live_before_c = (0..c).filter(|&k| e.alive(k)).count() as u32;
            e.compact();
            if e.rows() >= before {
                return Err(overflow);
            }
            c = live_before_c;
            continue;
        }
        c += 1;
    }
    e.compact();
    let table = CosetTable { ngens, data: e.table, subgroup: SubgroupTag::Words(subgroup.to_vec()) };
    Ok(table.standardized())
}

/// The action of `p` on the image of `h` by right multiplication; cosets are
/// image elements in breadth-first order from the identity.
pub fn table_from_hom(p: &Presentation, h: &PermutationHom) -> Result<CosetTable, CosetError> {
    if let Some(i) = p.relators.iter().position(|r| !h.eval(r).is_identity()) {
        return Err(CosetError::InconsistentHom(i));
    }
    let ngens = p.ngens();
    let (elements, index) = closure(h);
    let cols = 2 * ngens;
    let mut data = vec![0u32; elements.len() * cols];
    let invs: Vec<Permutation> = h.images.iter().map(|g| g.inverse()).collect();
    for (c, x) in elements.iter().enumerate() {
        for g in 0..ngens {
            data[c * cols + 2 * g] = index[&x.then(&h.images[g])] as u32;
            data[c * cols + 2 * g + 1] = index[&x.then(&invs[g])] as u32;
        }
    }
    Ok(CosetTable { ngens, data, subgroup: SubgroupTag::Kernel })
}

/// Elements of the group generated by the images of `h`, breadth first.
pub fn closure(h: &PermutationHom) -> (Vec<Permutation>, HashMap<Permutation, usize>) {
    let id = Permutation::identity(h.degree);
    let mut index = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id];
    let mut i = 0;
    while i < elements.len() {
        for g in &h.images {
            let y = elements[i].then(g);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        i += 1;
    }
    (elements, index)
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Enumeration over the trivial subgroup closed with exactly `n!` cosets.
    IsoSymmetric { cosets: usize },
    /// The kernel is nontrivial: either its abelianization is nonzero or the
    /// group order exceeds `n!`.
    KernelNontrivial { index: usize, order: Option<usize>, invariants: Option<AbelianInvariants> },
    Inconclusive { reason: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::IsoSymmetric { cosets } => write!(f, "iso-symmetric ({cosets} cosets)"),
            Verdict::KernelNontrivial { index, order, invariants } => {
                write!(f, "kernel nontrivial (index {index}")?;
                if let Some(o) = order {
                    write!(f, ", group order {o}")?;
                }
                if let Some(i) = invariants {
                    write!(f, ", abelianization {i}")?;
                }
                write!(f, ")")
            }
            Verdict::Inconclusive { reason } => write!(f, "inconclusive ({reason})"),
        }
    }
}

/// Decide whether `h` is an isomorphism onto `S_n`.
///
/// The kernel's abelianization is computed first; a nonzero answer settles
/// the question without enumerating a possibly infinite group. Otherwise the
/// trivial subgroup is enumerated.
pub fn certify_symmetric(p: &Presentation, h: &PermutationHom, lim: EnumerationLimits) -> Result<Verdict, CosetError> {
    let image = table_from_hom(p, h)?;
    let expected = factorial(h.degree);
    if image.len() != expected {
        return Err(CosetError::NonSurjective { order: image.len(), expected });
    }
    let kd = kernel::reidemeister_schreier(p, &image).expect("closed table");
    let inv = kernel::abelianization(&kd.presentation);
    Ok(certify_given(p, h.degree, &inv, lim))
}

/// The decision of [`certify_symmetric`] once the image has order `n!` and
/// the kernel abelianization `inv` is known.
pub fn certify_given(p: &Presentation, n: usize, inv: &AbelianInvariants, lim: EnumerationLimits) -> Verdict {
    let expected = factorial(n);
    if !inv.is_trivial() {
        return Verdict::KernelNontrivial { index: expected, order: None, invariants: Some(inv.clone()) };
    }
    match todd_coxeter(p, &[], lim) {
        Ok(t) if t.len() == expected => Verdict::IsoSymmetric { cosets: t.len() },
        Ok(t) => Verdict::KernelNontrivial { index: expected, order: Some(t.len()), invariants: Some(inv.clone()) },
        Err(CosetError::Overflow { max }) => Verdict::Inconclusive {
            reason: format!("kernel abelianization is zero and enumeration exceeded {max} cosets"),
        },
        Err(e) => Verdict::Inconclusive { reason: e.to_string() },
    }
}
