//! Reidemeister-Schreier rewriting, Smith normal form and abelian invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coset::CosetTable;
use crate::fpgroup::{Letter, Presentation, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("coset table is not closed")]
    OpenTable,
    #[error("word does not lie in the subgroup (ends at coset {0})")]
    NotInKernel(usize),
}

/// Non-tree edge `coset --gen-->` of the coset graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub gen: usize,
}

/// Presentation of the subgroup stabilizing coset 0 of a coset table.
#[derive(Debug)]
pub struct KernelData {
    pub schreier: Vec<SchreierGenerator>,
    pub presentation: Presentation,
    /// Coset representatives from the spanning tree.
    pub transversal: Vec<Word>,
    table: CosetTable,
    /// Kernel generator for each edge `coset * ngens + gen`; `None` on tree edges.
    label: Vec<Option<usize>>,
    abelian: OnceLock<AbelianizationMap>,
}

impl KernelData {
    pub fn index(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    /// Rewrite an ambient word read from coset `start`; returns the kernel
    /// word and the final coset.
    pub fn rewrite_from(&self, start: usize, w: &Word) -> (Word, usize) {
        let ng = self.table.ngens();
        let mut out = Vec::new();
        let mut c = start;
        for &l in w.letters() {
            if l.inverse {
                let d = self.table.act_letter(c, l);
                if let Some(s) = self.label[d * ng + l.gen] {
                    out.push(Letter::neg(s));
                }
                c = d;
            } else {
                if let Some(s) = self.label[c * ng + l.gen] {
                    out.push(Letter::pos(s));
                }
                c = self.table.act_letter(c, l);
            }
        }
        (Word::new(out), c)
    }

    /// Rewrite an ambient word lying in the subgroup.
    pub fn rewrite(&self, w: &Word) -> Result<Word, KernelError> {
        match self.rewrite_from(0, w) {
            (k, 0) => Ok(k),
            (_, c) => Err(KernelError::NotInKernel(c)),
        }
    }

    pub fn abelianization_map(&self) -> &AbelianizationMap {
        self.abelian.get_or_init(|| AbelianizationMap::new(&self.presentation))
    }
}

/// Build the Schreier presentation of the subgroup of a closed table.
///
/// The spanning tree is breadth-first from coset 0 over columns in order;
/// every non-tree edge is a generator, so there are `N*G - (N-1)` of them.
/// Each relator is rewritten from every coset.
pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Result<KernelData, KernelError> {
    let n = t.len();
    let ng = p.ngens();
    if t.ngens() != ng {
        return Err(KernelError::OpenTable);
    }
    for c in 0..n {
        for x in 0..2 * ng {
            if t.act_letter(c, Letter::new(x / 2, x % 2 == 1)) >= n {
                return Err(KernelError::OpenTable);
            }
        }
    }
    let mut tree = vec![false; n * ng];
    let mut transversal: Vec<Option<Word>> = vec![None; n];
    transversal[0] = Some(Word::identity());
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let c = queue[i];
        for x in 0..2 * ng {
            let l = Letter::new(x / 2, x % 2 == 1);
            let d = t.act_letter(c, l);
            if transversal[d].is_none() {
                let rep = transversal[c].as_ref().unwrap().concat(&Word::raw(vec![l]));
                transversal[d] = Some(rep);
                let edge = if l.inverse { d * ng + l.gen } else { c * ng + l.gen };
                tree[edge] = true;
                queue.push(d);
            }
        }
        i += 1;
    }
    let mut label = vec![None; n * ng];
    let mut schreier = Vec::new();
    let mut names = Vec::new();
    for c in 0..n {
        for g in 0..ng {
            if !tree[c * ng + g] {
                label[c * ng + g] = Some(schreier.len());
                schreier.push(SchreierGenerator { coset: c, gen: g });
                names.push(format!("{}_{}", p.names[g], c + 1));
            }
        }
    }
    let mut kd = KernelData {
        schreier,
        presentation: Presentation { names, relators: Vec::new() },
        transversal: transversal.into_iter().map(|w| w.expect("table is connected")).collect(),
        table: t.clone(),
        label,
        abelian: OnceLock::new(),
    };
    let mut relators = Vec::new();
    for c in 0..n {
        for r in &p.relators {
            let (k, end) = kd.rewrite_from(c, r);
            debug_assert_eq!(end, c, "relator does not close at coset {c}");
            let k = k.cyclically_reduced();
            if !k.is_empty() {
                relators.push(k);
            }
        }
    }
    kd.presentation.relators = relators;
    Ok(kd)
}

/// Dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntegerMatrix { rows: rows.len(), cols, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                for j in 0..n {
                    m.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
            }
            prev = m[k * n + k].clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * &m[n * n - 1]
        }
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let mut u = IntegerMatrix::identity(a.rows);
    let mut v = IntegerMatrix::identity(a.cols);
    let s = snf_core(a.clone(), Some(&mut u), Some(&mut v));
    SmithForm { s, u, v }
}

fn snf_core(mut s: IntegerMatrix, mut u: Option<&mut IntegerMatrix>, mut v: Option<&mut IntegerMatrix>) -> IntegerMatrix {
    let (r, c) = (s.rows, s.cols);
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = s.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.magnitude() < s.get(bi, bj).magnitude()) {
                        best = Some((i, j));
                        if x.magnitude().is_one() {
                            break;
                        }
                    }
                }
                if best.is_some_and(|(bi, bj)| s.get(bi, bj).magnitude().is_one()) {
                    break;
                }
            }
            let Some((pi, pj)) = best else {
                return s;
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(t, pi);
            }
            if let Some(v) = v.as_deref_mut() {
                v.swap_cols(t, pj);
            }
            let p = s.get(t, t).clone();
            let mut clear = true;
            for i in t + 1..r {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t) / &p);
                s.add_row(i, t, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row(i, t, &q);
                }
                clear &= s.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j) / &p);
                s.add_col(j, t, &q);
                if let Some(v) = v.as_deref_mut() {
                    v.add_col(j, t, &q);
                }
                clear &= s.get(t, j).is_zero();
            }
            if !clear {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    if let Some(u) = u.as_deref_mut() {
                        u.add_row(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(t);
            }
        }
    }
    s
}

/// Free rank and torsion divisors `d1 | d2 | ...`, each greater than 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { rank, torsion: Vec::new() }
    }

    /// From diagonal entries of a Smith form over `ncols` generators.
    pub fn from_diagonal(diag: &[BigInt], ncols: usize) -> Self {
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        AbelianInvariants {
            rank: ncols - nonzero,
            torsion: diag.iter().filter(|d| !d.is_zero() && !d.magnitude().is_one()).map(|d| d.abs()).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn divisibility_holds(&self) -> bool {
        self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])) && self.torsion.iter().all(|d| *d > BigInt::one())
    }

    /// True if every torsion divisor is a power of two.
    pub fn torsion_is_2_power(&self) -> bool {
        self.torsion.iter().all(|d| {
            let mut d = d.clone();
            while d.is_even() && !d.is_zero() {
                d /= 2;
            }
            d.is_one()
        })
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let k = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") });
            i += k;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Error)]
#[error("bad abelian invariants `{0}`")]
pub struct InvariantsParseError(String);

impl FromStr for AbelianInvariants {
    type Err = InvariantsParseError;

    /// Inverse of `Display`; also accepts `Z` for `Z^1` and repeated `Z/d` terms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || InvariantsParseError(s.to_string());
        let s = s.trim();
        let mut out = AbelianInvariants::trivial();
        if s == "0" {
            return Ok(out);
        }
        for part in s.split('+') {
            let part = part.trim();
            if let Some(rest) = part.strip_prefix("(Z/") {
                let (d, k) = rest.split_once(")^").ok_or_else(err)?;
                let d: BigInt = d.parse().map_err(|_| err())?;
                let k: usize = k.parse().map_err(|_| err())?;
                out.torsion.extend(std::iter::repeat_n(d, k));
            } else if let Some(d) = part.strip_prefix("Z/") {
                out.torsion.push(d.parse().map_err(|_| err())?);
            } else if part == "Z" {
                out.rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                out.rank += r.parse::<usize>().map_err(|_| err())?;
            } else {
                return Err(err());
            }
        }
        out.torsion.sort();
        if !out.divisibility_holds() {
            return Err(err());
        }
        Ok(out)
    }
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AbelianInvariants {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

type SparseRow = BTreeMap<usize, BigInt>;

/// The quotient map from `Z^ngens` onto the abelianization, in coordinates
/// adapted to its invariant factors.
#[derive(Clone, Debug)]
pub struct AbelianizationMap {
    ngens: usize,
    /// Unit-pivot eliminations in order: column and the pivot row at the
    /// time, scaled so the pivot entry is 1.
    eliminated: Vec<(usize, SparseRow)>,
    /// Columns of the residual dense block.
    rest: Vec<usize>,
    /// Column transform of the residual block's Smith form.
    v: IntegerMatrix,
    /// Diagonal of the residual Smith form, padded with zeros to `rest.len()`.
    diag: Vec<BigInt>,
    pub invariants: AbelianInvariants,
}

/// Image of an element: residues modulo torsion divisors, then free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianElement {
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigints")]
    pub free: Vec<BigInt>,
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl AbelianElement {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Zero::is_zero)
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
        let z: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        write!(f, "torsion [{}] free [{}]", t.join(", "), z.join(", "))
    }
}

impl AbelianizationMap {
    pub fn new(p: &Presentation) -> Self {
        let ng = p.ngens();
        let mut rows: Vec<SparseRow> = Vec::new();
        for r in &p.relators {
            let row: SparseRow = r
                .exponent_vector(ng)
                .into_iter()
                .enumerate()
                .filter(|(_, x)| *x != 0)
                .map(|(i, x)| (i, BigInt::from(x)))
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
        let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); ng];
        for (i, r) in rows.iter().enumerate() {
            for &c in r.keys() {
                col_rows[c].insert(i);
            }
        }
        let mut active = vec![true; rows.len()];
        let mut col_alive = vec![true; ng];
        let mut eliminated = Vec::new();

        loop {
            // unit pivot minimizing fill-in
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, r) in rows.iter().enumerate() {
                if !active[i] {
                    continue;
                }
                for (&c, v) in r {
                    if v.magnitude().is_one() {
                        let cost = (r.len() - 1) * (col_rows[c].len() - 1);
                        if best.is_none_or(|b| cost < b.0) {
                            best = Some((cost, i, c));
                        }
                    }
                }
                if best.is_some_and(|b| b.0 == 0) {
                    break;
                }
            }
            let Some((_, pi, pc)) = best else { break };
            let mut prow = std::mem::take(&mut rows[pi]);
            active[pi] = false;
            for &c in prow.keys() {
                col_rows[c].remove(&pi);
            }
            if prow[&pc].is_negative() {
                for v in prow.values_mut() {
                    *v = -std::mem::take(v);
                }
            }
            let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
            for k in targets {
                let f = rows[k][&pc].clone();
                for (&c, v) in &prow {
                    let nv = rows[k].get(&c).cloned().unwrap_or_default() - &f * v;
                    if nv.is_zero() {
                        rows[k].remove(&c);
                        col_rows[c].remove(&k);
                    } else {
                        rows[k].insert(c, nv);
                        col_rows[c].insert(k);
                    }
                }
                if rows[k].is_empty() {
                    active[k] = false;
                }
            }
            col_alive[pc] = false;
            eliminated.push((pc, prow));
        }

        let rest: Vec<usize> = (0..ng).filter(|&c| col_alive[c]).collect();
        let pos: BTreeMap<usize, usize> = rest.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dense_rows: Vec<&SparseRow> = rows.iter().enumerate().filter(|(i, r)| active[*i] && !r.is_empty()).map(|(_, r)| r).collect();
        let mut m = IntegerMatrix::zeros(dense_rows.len(), rest.len());
        for (i, r) in dense_rows.iter().enumerate() {
            for (c, v) in r.iter() {
                m.set(i, pos[c], v.clone());
            }
        }
        let mut v = IntegerMatrix::identity(rest.len());
        let s = snf_core(m, None, Some(&mut v));
        let mut diag = s.diagonal();
        diag.resize(rest.len(), BigInt::zero());
        let invariants = AbelianInvariants::from_diagonal(&diag, rest.len());
        AbelianizationMap { ngens: ng, eliminated, rest, v, diag, invariants }
    }

    /// Image of an exponent vector.
    pub fn image_of_vector(&self, x: &[i64]) -> AbelianElement {
        assert_eq!(x.len(), self.ngens);
        let mut x: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        for (c, row) in &self.eliminated {
            let f = x[*c].clone();
            if !f.is_zero() {
                for (&j, v) in row {
                    x[j] -= &f * v;
                }
            }
        }
        let k = self.rest.len();
        let mut y = vec![BigInt::zero(); k];
        for (i, &c) in self.rest.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                let vij = self.v.get(i, j);
                if !vij.is_zero() {
                    *yj += &x[c] * vij;
                }
            }
        }
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (yj, d) in y.into_iter().zip(&self.diag) {
            if d.is_zero() {
                free.push(yj);
            } else if !d.is_one() {
                torsion.push(yj.mod_floor(d));
            }
        }
        AbelianElement { torsion, free }
    }

    pub fn image(&self, w: &Word) -> AbelianElement {
        self.image_of_vector(&w.exponent_vector(self.ngens))
    }
}

/// Abelian invariants of the group presented by `p`.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    AbelianizationMap::new(p).invariants
}

/// Image of an ambient word in the abelianized subgroup of `kd`.
pub fn element_image(w: &Word, kd: &KernelData) -> Result<AbelianElement, KernelError> {
    let k = kd.rewrite(w)?;
    Ok(kd.abelianization_map().image(&k))
}

/// Convert a small value for reporting.
pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{table_from_hom, todd_coxeter, EnumerationLimits};
    use crate::fpgroup::{parse_word, Permutation, PermutationHom};

    fn pres(names: &[&str], rels: &[&str]) -> Presentation {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|r| parse_word(r, &names).unwrap()).collect();
        Presentation::new(names, rels)
    }

    #[test]
    fn snf_small() {
        let a = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let f = smith_normal_form(&a);
        assert_eq!(f.s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
        let z = IntegerMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&z).s, z);
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(abelianization(&pres(&["a", "b"], &["[a, b]"])), AbelianInvariants::free(2));
        let c3 = abelianization(&pres(&["a"], &["a^3"]));
        assert_eq!(c3.to_string(), "Z/3");
        assert_eq!(abelianization(&pres(&["a", "b"], &["a^2 b^4", "a^4 b^2"])).to_string(), "Z/2 + Z/6");
    }

    #[test]
    fn invariants_round_trip() {
        for s in ["0", "Z^8", "(Z/2)^2", "Z^3 + Z/2 + Z/4"] {
            assert_eq!(s.parse::<AbelianInvariants>().unwrap().to_string(), s);
        }
        assert_eq!("(Z/2)^3".parse::<AbelianInvariants>().unwrap().to_string(), "(Z/2)^3");
        assert_eq!("Z/4 + Z/2 + Z/2".parse::<AbelianInvariants>().unwrap().to_string(), "(Z/2)^2 + Z/4");
        assert!("Z/2 + Z/3".parse::<AbelianInvariants>().is_err());
    }

    #[test]
    fn kernel_of_z_to_z2() {
        let p = pres(&["x"], &[]);
        let h = PermutationHom::new(2, vec![Permutation::transposition(2, 1, 2)]);
        let t = table_from_hom(&p, &h).unwrap();
        let kd = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(kd.presentation.ngens(), 1);
        assert_eq!(abelianization(&kd.presentation), AbelianInvariants::free(1));
        let x2 = parse_word("x^2", &p.names).unwrap();
        assert_eq!(kd.rewrite(&x2).unwrap().len(), 1);
        assert!(!element_image(&x2, &kd).unwrap().is_zero());
        assert_eq!(element_image(&Word::gen(0), &kd), Err(KernelError::NotInKernel(1)));
        assert!(element_image(&Word::identity(), &kd).unwrap().is_zero());
    }

    #[test]
    fn index_one_kernel() {
        let p = pres(&["a", "b"], &["a^2", "b^3", "[a, b]"]);
        let t = todd_coxeter(&p, &[Word::gen(0), Word::gen(1)], EnumerationLimits::default()).unwrap();
        assert_eq!(t.len(), 1);
        let kd = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(abelianization(&kd.presentation), abelianization(&p));
    }

    #[test]
    fn torsion_coordinates() {
        // Z/2 + Z/4 via a^2, b^4
        let p = pres(&["a", "b"], &["a^2", "b^4", "[a, b]"]);
        let m = AbelianizationMap::new(&p);
        assert_eq!(m.invariants.to_string(), "Z/2 + Z/4");
        assert!(m.image(&parse_word("a^2", &p.names).unwrap()).is_zero());
        assert!(!m.image(&parse_word("b^2", &p.names).unwrap()).is_zero());
        assert!(m.image(&parse_word("b^4 a^-2", &p.names).unwrap()).is_zero());
    }
}
