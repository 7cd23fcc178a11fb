//! Words, finitely presented groups, permutations and Tietze simplification.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// Column index in a coset table: `2g` for `g`, `2g+1` for `g^-1`.
    pub fn column(self) -> usize {
        2 * self.gen + self.inverse as usize
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in the free group. The canonical constructor freely reduces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        free_reduce(&Word(letters))
    }

    /// Wrap letters without reducing.
    pub fn raw(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word::new(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::new();
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word::new(v)
    }

    /// `x y x^-1 y^-1`
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// `x y x y^-1 x^-1 y^-1`, the cusp relator.
    pub fn triple(x: &Word, y: &Word) -> Word {
        x.concat(y)
            .concat(x)
            .concat(&y.inverse())
            .concat(&x.inverse())
            .concat(&y.inverse())
    }

    /// Free reduction followed by removal of cancelling letters at the two ends.
    pub fn cyclically_reduced(&self) -> Word {
        let w = free_reduce(self).0;
        let (mut i, mut j) = (0, w.len());
        while j >= i + 2 && w[i] == w[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    /// Exponent sum of each generator.
    pub fn exponent_vector(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0; ngens];
        for l in &self.0 {
            v[l.gen] += l.sign();
        }
        v
    }

    pub fn contains_gen(&self, g: usize) -> bool {
        self.0.iter().any(|l| l.gen == g)
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replace every occurrence of generator `g` by `w`.
    pub fn substitute(&self, g: usize, w: &Word) -> Word {
        let winv = w.inverse();
        let mut v = Vec::with_capacity(self.len());
        for l in &self.0 {
            if l.gen == g {
                v.extend_from_slice(if l.inverse { &winv.0 } else { &w.0 });
            } else {
                v.push(*l);
            }
        }
        Word::new(v)
    }

    /// Rename generators through `map`; letters mapping to `None` are dropped.
    pub fn relabel(&self, map: &[Option<usize>]) -> Word {
        Word::new(
            self.0
                .iter()
                .filter_map(|l| map[l.gen].map(|g| Letter::new(g, l.inverse)))
                .collect(),
        )
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Least rotation of `w` or `w^-1`; equal for relators that differ by
    /// rotation and inversion.
    pub fn canonical_cyclic(&self) -> Vec<Letter> {
        let mut best: Option<Vec<Letter>> = None;
        for base in [self.0.clone(), self.inverse().0] {
            let n = base.len();
            for s in 0..n.max(1) {
                let rot: Vec<Letter> = base[s..].iter().chain(base[..s].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        best.unwrap_or_default()
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match self.names.get(l.gen) {
                Some(n) => write!(f, "{n}")?,
                None => write!(f, "x{}", l.gen)?,
            }
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Remove adjacent `x x^-1` pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.0.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word `{0}`")]
    Malformed(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

/// Parse a word over `names`.
///
/// Tokens are separated by whitespace; a token may carry `^k` (any nonzero
/// integer). `[x, y]` denotes a commutator and `<x, y>` the cusp relator
/// `x y x y^-1 x^-1 y^-1`; both nest. `e` or `1` alone is the identity.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, ParseError> {
    let lookup: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let w = parse_seq(&chars, &mut pos, &lookup, text)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(ParseError::Malformed(text.to_string()));
    }
    Ok(w)
}

fn skip_ws(c: &[char], pos: &mut usize) {
    while *pos < c.len() && c[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_seq(
    c: &[char],
    pos: &mut usize,
    lookup: &HashMap<&str, usize>,
    text: &str,
) -> Result<Word, ParseError> {
    let mut acc = Word::identity();
    loop {
        skip_ws(c, pos);
        if *pos >= c.len() || matches!(c[*pos], ',' | ']' | '>') {
            return Ok(acc);
        }
        let atom = match c[*pos] {
            '[' | '<' => {
                let open = c[*pos];
                let close = if open == '[' { ']' } else { '>' };
                *pos += 1;
                let x = parse_seq(c, pos, lookup, text)?;
                skip_ws(c, pos);
                if *pos >= c.len() || c[*pos] != ',' {
                    return Err(ParseError::Malformed(text.to_string()));
                }
                *pos += 1;
                let y = parse_seq(c, pos, lookup, text)?;
                skip_ws(c, pos);
                if *pos >= c.len() || c[*pos] != close {
                    return Err(ParseError::Malformed(text.to_string()));
                }
                *pos += 1;
                if open == '[' {
                    Word::commutator(&x, &y)
                } else {
                    Word::triple(&x, &y)
                }
            }
            _ => {
                let start = *pos;
                while *pos < c.len() && !c[*pos].is_whitespace() && !"[]<>,^".contains(c[*pos]) {
                    *pos += 1;
                }
                let tok: String = c[start..*pos].iter().collect();
                if tok.is_empty() {
                    return Err(ParseError::Malformed(text.to_string()));
                }
                if tok == "e" || tok == "1" {
                    Word::identity()
                } else {
                    match lookup.get(tok.as_str()) {
                        Some(&g) => Word::gen(g),
                        None => return Err(ParseError::UnknownGenerator(tok)),
                    }
                }
            }
        };
        let exp = parse_exponent(c, pos).ok_or_else(|| ParseError::Malformed(text.to_string()))?;
        acc = acc.concat(&atom.pow(exp));
    }
}

fn parse_exponent(c: &[char], pos: &mut usize) -> Option<i64> {
    if *pos >= c.len() || c[*pos] != '^' {
        return Some(1);
    }
    *pos += 1;
    let start = *pos;
    if *pos < c.len() && c[*pos] == '-' {
        *pos += 1;
    }
    while *pos < c.len() && c[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let s: String = c[start..*pos].iter().collect();
    s.parse().ok().filter(|&k: &i64| k != 0)
}

/// A finitely presented group. Generator ids are indices into `names`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub names: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Self {
        let relators = relators
            .into_iter()
            .map(|r| r.cyclically_reduced())
            .filter(|r| !r.is_empty())
            .collect();
        Presentation { names, relators }
    }

    /// Presentation on `n` generators named `x1..xn`.
    pub fn with_generators(n: usize) -> Self {
        Presentation {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
            relators: Vec::new(),
        }
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        parse_word(text, &self.names)
    }

    pub fn is_well_formed(&self) -> bool {
        self.relators.iter().all(|r| r.max_gen().is_none_or(|g| g < self.ngens()))
    }

    /// Text dump: a `generators` section with one name per line, then a
    /// `relators` section with one word per line. `comments[i]`, if given,
    /// is written as `# ...` before relator `i`.
    pub fn dump(&self, comments: Option<&[String]>) -> String {
        let mut s = String::from("generators\n");
        for n in &self.names {
            s.push_str(n);
            s.push('\n');
        }
        s.push_str("relators\n");
        let mut last: Option<&String> = None;
        for (i, r) in self.relators.iter().enumerate() {
            if let Some(c) = comments.and_then(|c| c.get(i)) {
                if last != Some(c) {
                    s.push_str("# ");
                    s.push_str(c);
                    s.push('\n');
                    last = Some(c);
                }
            }
            s.push_str(&r.display(&self.names).to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Presentation, ParseError> {
        let mut names = Vec::new();
        let mut rel_lines = Vec::new();
        let mut section = 0;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "generators" => section = 1,
                "relators" => section = 2,
                _ if section == 1 => names.push(line.to_string()),
                _ if section == 2 => rel_lines.push((no + 1, line)),
                _ => {
                    return Err(ParseError::Line { line: no + 1, msg: "expected `generators`".into() })
                }
            }
        }
        let mut relators = Vec::new();
        for (no, line) in rel_lines {
            let w = parse_word(line, &names).map_err(|e| ParseError::Line { line: no, msg: e.to_string() })?;
            relators.push(w);
        }
        Ok(Presentation::new(names, relators))
    }
}

/// `p` plus `g^2` for every generator.
pub fn add_square_relators(p: &Presentation) -> Presentation {
    let mut q = p.clone();
    for g in 0..p.ngens() {
        q.relators.push(Word::raw(vec![Letter::pos(g), Letter::pos(g)]));
    }
    q
}

/// A permutation of `0..n`, acting on the right: `p.then(q)` applies `p` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Transposition of the 1-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a - 1, b - 1);
        p
    }

    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn then(&self, q: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| q.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut r = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x as usize] = i as u32;
        }
        Permutation(r)
    }

    /// `s^-1 self s`
    pub fn conjugate_by(&self, s: &Permutation) -> Permutation {
        s.inverse().then(self).then(s)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Moved points, 1-based.
    pub fn support(&self) -> BTreeSet<usize> {
        self.0.iter().enumerate().filter(|(i, &x)| *i as u32 != x).map(|(i, _)| i + 1).collect()
    }

    pub fn is_transposition(&self) -> bool {
        let s = self.support();
        s.len() == 2 && self.then(self).is_identity()
    }

    /// Disjoint cycles of length > 1, 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x + 1);
                x = self.0[x] as usize;
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A homomorphism from a presentation's free group to `S_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationHom {
    pub degree: usize,
    pub images: Vec<Permutation>,
}

impl PermutationHom {
    pub fn new(degree: usize, images: Vec<Permutation>) -> Self {
        PermutationHom { degree, images }
    }

    /// Image of `w`, multiplying letters left to right.
    pub fn eval(&self, w: &Word) -> Permutation {
        let mut p = Permutation::identity(self.degree);
        for l in w.letters() {
            let g = &self.images[l.gen];
            p = if l.inverse { p.then(&g.inverse()) } else { p.then(g) };
        }
        p
    }

    pub fn is_consistent(&self, p: &Presentation) -> bool {
        self.images.len() == p.ngens() && p.relators.iter().all(|r| self.eval(r).is_identity())
    }

    /// Restrict to the generators listed in `kept` (old ids, new order).
    pub fn restrict(&self, kept: &[usize]) -> PermutationHom {
        PermutationHom::new(self.degree, kept.iter().map(|&g| self.images[g].clone()).collect())
    }
}

/// Result of [`tietze_simplify`].
#[derive(Clone, Debug)]
pub struct TietzeResult {
    pub presentation: Presentation,
    /// Old ids of surviving generators; new id `i` is `kept[i]`.
    pub kept: Vec<usize>,
    /// Eliminated generator (old id) and its value as a word in the
    /// surviving generators (old ids).
    pub eliminated: Vec<(usize, Word)>,
    pub original_ngens: usize,
    pub passes: usize,
    pub budget_exhausted: bool,
}

impl TietzeResult {
    /// Express an ambient word (old ids) in the surviving generators.
    pub fn rewrite(&self, w: &Word) -> Word {
        let mut w = w.clone();
        for (g, def) in &self.eliminated {
            if w.contains_gen(*g) {
                w = w.substitute(*g, def);
            }
        }
        let mut map = vec![None; self.original_ngens];
        for (i, &g) in self.kept.iter().enumerate() {
            map[g] = Some(i);
        }
        w.relabel(&map)
    }
}

pub const DEFAULT_TIETZE_BUDGET: usize = 10_000;

/// Longest relator used for length-reducing substitutions.
const SUBSTITUTION_MAX_LEN: usize = 12;
/// Longest defining word accepted for a generator elimination.
const ELIMINATION_MAX_LEN: usize = 24;
/// Eliminations stop when the total relator length would exceed this
/// multiple of its starting value.
const GROWTH_FACTOR: usize = 4;

struct Relators {
    words: Vec<Option<Word>>,
    occ: Vec<BTreeSet<usize>>,
}

impl Relators {
    fn new(ngens: usize, rels: &[Word]) -> Self {
        let mut r = Relators { words: Vec::new(), occ: vec![BTreeSet::new(); ngens] };
        for w in rels {
            r.push(w.clone());
        }
        r
    }

    fn push(&mut self, w: Word) {
        let w = w.cyclically_reduced();
        if w.is_empty() {
            return;
        }
        let i = self.words.len();
        for l in w.letters() {
            self.occ[l.gen].insert(i);
        }
        self.words.push(Some(w));
    }

    fn remove(&mut self, i: usize) -> Option<Word> {
        let w = self.words[i].take()?;
        for l in w.letters() {
            self.occ[l.gen].remove(&i);
        }
        Some(w)
    }

    fn replace(&mut self, i: usize, w: Word) {
        self.remove(i);
        let w = w.cyclically_reduced();
        if w.is_empty() {
            return;
        }
        for l in w.letters() {
            self.occ[l.gen].insert(i);
        }
        self.words[i] = Some(w);
    }

    fn total(&self) -> usize {
        self.words.iter().flatten().map(Word::len).sum()
    }

    fn live(&self) -> impl Iterator<Item = (usize, &Word)> {
        self.words.iter().enumerate().filter_map(|(i, w)| w.as_ref().map(|w| (i, w)))
    }

    fn dedup(&mut self) -> bool {
        let mut seen = BTreeSet::new();
        let mut changed = false;
        for i in 0..self.words.len() {
            if let Some(w) = &self.words[i] {
                if !seen.insert(w.canonical_cyclic()) {
                    self.remove(i);
                    changed = true;
                }
            }
        }
        changed
    }
}

/// Candidate elimination: relator `rel` contains `gen` exactly once.
fn defining_word(w: &Word, g: usize) -> Option<Word> {
    let pos: Vec<usize> = w.letters().iter().enumerate().filter(|(_, l)| l.gen == g).map(|(i, _)| i).collect();
    if pos.len() != 1 {
        return None;
    }
    let i = pos[0];
    let l = w.letters()[i];
    // w = u g^s v  =>  g^s = u^-1 v^-1  =>  g = (v u)^(-s)
    let vu = Word::new(w.letters()[i + 1..].iter().chain(w.letters()[..i].iter()).copied().collect());
    Some(if l.inverse { vu } else { vu.inverse() })
}

/// Simplify `p` by Tietze transformations.
///
/// Each pass cyclically reduces and deduplicates relators, eliminates
/// generators that occur exactly once in some relator (length-1 and
/// length-2 relators in one batch, otherwise the single candidate with the
/// shortest defining word, ties to the lowest generator id), and replaces
/// subwords of relators that make up more than half of a short relator.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> TietzeResult {
    let n = p.ngens();
    let mut rels = Relators::new(n, &p.relators);
    let mut alive = vec![true; n];
    let mut eliminated: Vec<(usize, Word)> = Vec::new();
    let length_cap = rels.total().max(64) * GROWTH_FACTOR;
    let mut passes = 0;
    let mut exhausted = false;

    loop {
        if passes >= budget {
            exhausted = true;
            break;
        }
        passes += 1;
        let mut changed = rels.dedup();

        // batch: relators of length 1 or 2
        loop {
            let short = rels.live().find(|(_, w)| w.len() <= 2 && {
                let ls = w.letters();
                ls.len() == 1 || ls[0].gen != ls[1].gen
            });
            let Some((i, w)) = short else { break };
            let w = w.clone();
            let g = w.letters().iter().map(|l| l.gen).min().unwrap();
            let def = defining_word(&w, g).expect("short relator defines each of its generators");
            eliminate(&mut rels, &mut alive, &mut eliminated, i, g, def);
            changed = true;
        }

        // single best elimination
        let mut best: Option<(usize, usize, usize, Word)> = None;
        let total = rels.total();
        for g in (0..n).filter(|&g| alive[g]) {
            for &i in &rels.occ[g] {
                let w = rels.words[i].as_ref().unwrap();
                if w.len() > ELIMINATION_MAX_LEN + 1 {
                    continue;
                }
                let Some(def) = defining_word(w, g) else { continue };
                let growth: usize = rels.occ[g]
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| rels.words[j].as_ref().unwrap().letters().iter().filter(|l| l.gen == g).count())
                    .sum::<usize>()
                    * def.len();
                if total + growth > length_cap {
                    continue;
                }
                let key = (def.len(), g);
                if best.as_ref().is_none_or(|b| key < (b.0, b.1)) {
                    best = Some((def.len(), g, i, def));
                }
            }
        }
        if let Some((_, g, i, def)) = best {
            eliminate(&mut rels, &mut alive, &mut eliminated, i, g, def);
            changed = true;
        }

        changed |= substitute_pass(&mut rels);
        if !changed {
            break;
        }
    }

    let kept: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
    let mut map = vec![None; n];
    for (i, &g) in kept.iter().enumerate() {
        map[g] = Some(i);
    }
    let names = kept.iter().map(|&g| p.names[g].clone()).collect();
    let relators = rels.words.iter().flatten().map(|w| w.relabel(&map)).collect();
    TietzeResult {
        presentation: Presentation::new(names, relators),
        kept,
        eliminated,
        original_ngens: n,
        passes,
        budget_exhausted: exhausted,
    }
}

fn eliminate(
    rels: &mut Relators,
    alive: &mut [bool],
    eliminated: &mut Vec<(usize, Word)>,
    rel: usize,
    g: usize,
    def: Word,
) {
    rels.remove(rel);
    let targets: Vec<usize> = rels.occ[g].iter().copied().collect();
    for j in targets {
        let w = rels.words[j].as_ref().unwrap().substitute(g, &def);
        rels.replace(j, w);
    }
    for (_, d) in eliminated.iter_mut() {
        if d.contains_gen(g) {
            *d = d.substitute(g, &def);
        }
    }
    eliminated.push((g, def));
    alive[g] = false;
}

/// One round of length-reducing substitutions with relators of length at
/// most [`SUBSTITUTION_MAX_LEN`].
fn substitute_pass(rels: &mut Relators) -> bool {
    let mut changed = false;
    let shorts: Vec<(usize, Word)> = rels
        .live()
        .filter(|(_, w)| w.len() <= SUBSTITUTION_MAX_LEN)
        .map(|(i, w)| (i, w.clone()))
        .collect();
    for (si, r) in shorts {
        if rels.words[si].as_ref() != Some(&r) {
            continue;
        }
        let len = r.len();
        let k = len / 2 + 1;
        // patterns: rotations of r and r^-1; a prefix u of length k equals
        // the inverse of the remaining suffix
        let mut patterns: BTreeMap<Vec<Letter>, Word> = BTreeMap::new();
        for base in [r.clone(), r.inverse()] {
            let ls = base.letters();
            for s in 0..len {
                let rot: Vec<Letter> = ls[s..].iter().chain(ls[..s].iter()).copied().collect();
                let u = rot[..k].to_vec();
                let rest = Word::raw(rot[k..].to_vec()).inverse();
                patterns.entry(u).or_insert(rest);
            }
        }
        let first_gens: BTreeSet<usize> = r.letters().iter().map(|l| l.gen).collect();
        let mut cands: BTreeSet<usize> = BTreeSet::new();
        for g in &first_gens {
            cands.extend(rels.occ[*g].iter().copied());
        }
        cands.remove(&si);
        for j in cands {
            let Some(w) = rels.words[j].clone() else { continue };
            if w.len() < k {
                continue;
            }
            if let Some(nw) = reduce_with(&w, &patterns, k) {
                rels.replace(j, nw);
                changed = true;
            }
        }
    }
    changed
}

/// Replace occurrences (cyclically) of pattern keys in `w` by their shorter
/// values; `None` if nothing was replaced.
fn reduce_with(w: &Word, patterns: &BTreeMap<Vec<Letter>, Word>, k: usize) -> Option<Word> {
    let mut cur = w.letters().to_vec();
    let mut any = false;
    'outer: loop {
        let n = cur.len();
        if n < k {
            break;
        }
        for s in 0..n {
            let window: Vec<Letter> = (0..k).map(|t| cur[(s + t) % n]).collect();
            if let Some(rep) = patterns.get(&window) {
                // rotate so the match starts at 0, then splice
                let mut rot: Vec<Letter> = cur[s..].iter().chain(cur[..s].iter()).copied().collect();
                rot.splice(0..k, rep.letters().iter().copied());
                cur = Word::new(rot).cyclically_reduced().letters().to_vec();
                any = true;
                continue 'outer;
            }
        }
        break;
    }
    any.then(|| Word::raw(cur))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_reduce_examples() {
        let x = Letter::pos(0);
        let y = Letter::pos(1);
        assert!(free_reduce(&Word::raw(vec![x, x.inv()])).is_empty());
        let w = free_reduce(&Word::raw(vec![x, y, y.inv(), x]));
        assert_eq!(w, Word::raw(vec![x, x]));
        assert_eq!(free_reduce(&w), w);
    }

    #[test]
    fn cyclic_reduction() {
        let n = names(&["a", "b"]);
        let w = parse_word("a b a^-1", &n).unwrap();
        assert_eq!(w.cyclically_reduced(), parse_word("b", &n).unwrap());
    }

    #[test]
    fn parse_brackets_and_powers() {
        let n = names(&["a", "b"]);
        let c = parse_word("[a, b]", &n).unwrap();
        assert_eq!(c, parse_word("a b a^-1 b^-1", &n).unwrap());
        let t = parse_word("<a, b>", &n).unwrap();
        assert_eq!(t, parse_word("a b a b^-1 a^-1 b^-1", &n).unwrap());
        assert_eq!(parse_word("a^3", &n).unwrap().len(), 3);
        assert!(parse_word("e", &n).unwrap().is_empty());
        assert!(matches!(parse_word("c", &n), Err(ParseError::UnknownGenerator(_))));
        assert!(parse_word("[a, b", &n).is_err());
    }

    #[test]
    fn triple_of_swapped_pair_is_inverse() {
        let n = names(&["a", "b"]);
        let ab = parse_word("<a, b>", &n).unwrap();
        let ba = parse_word("<b, a>", &n).unwrap();
        assert_eq!(ab.inverse(), ba);
    }

    #[test]
    fn squares() {
        let p = Presentation::with_generators(1);
        let q = add_square_relators(&p);
        assert_eq!(q.relators, vec![Word::raw(vec![Letter::pos(0); 2])]);
        assert_eq!(add_square_relators(&Presentation::default()), Presentation::default());
    }

    #[test]
    fn permutation_right_action() {
        let a = Permutation::transposition(3, 1, 2);
        let b = Permutation::transposition(3, 2, 3);
        // 1 -> 2 -> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b).to_string(), "(1 3 2)");
        assert!(a.then(&a).is_identity());
        assert_eq!(b.conjugate_by(&a), Permutation::transposition(3, 1, 3));
    }

    #[test]
    fn tietze_defining_relator() {
        let n = names(&["a", "b"]);
        let p = Presentation::new(n.clone(), vec![parse_word("b a^-3", &n).unwrap()]);
        let t = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert_eq!(t.presentation.names, vec!["a".to_string()]);
        assert!(t.presentation.relators.is_empty());
        assert_eq!(t.rewrite(&Word::gen(1)), parse_word("a^3", &t.presentation.names).unwrap());
    }

    #[test]
    fn tietze_keeps_nontrivial_relators() {
        let n = names(&["a", "b"]);
        let p = Presentation::new(n.clone(), vec![parse_word("a^3", &n).unwrap(), parse_word("b^2", &n).unwrap()]);
        let t = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert_eq!(t.presentation.ngens(), 2);
        assert_eq!(t.presentation.relators.len(), 2);
    }

    #[test]
    fn tietze_budget_flag() {
        let n = names(&["a", "b", "c"]);
        let p = Presentation::new(
            n.clone(),
            vec![parse_word("b a^-1", &n).unwrap(), parse_word("c a^-2", &n).unwrap()],
        );
        let t = tietze_simplify(&p, 1);
        assert!(t.budget_exhausted);
        let t = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert!(!t.budget_exhausted);
        assert_eq!(t.presentation.ngens(), 1);
    }

    #[test]
    fn dump_round_trip() {
        let n = names(&["g1", "g1p"]);
        let p = Presentation::new(n.clone(), vec![parse_word("g1 g1p^-1", &n).unwrap()]);
        let q = Presentation::parse(&p.dump(Some(&["vertex 1".to_string()]))).unwrap();
        assert_eq!(p, q);
    }
}
