//! Van Kampen presentations of branch-curve complements from relation schemas.
//!
//! Edge `j` contributes the generators `g{j}` (id `2(j-1)`) and `g{j}p`
//! (id `2(j-1)+1`), standing for the two lines the edge regenerates to.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::degen::{self, PlanarDegeneration, VertexKind};
use crate::fpgroup::{Letter, Permutation, PermutationHom, Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    pub edge: usize,
    pub primed: bool,
}

impl GeneratorSymbol {
    pub fn id(self) -> usize {
        2 * (self.edge - 1) + self.primed as usize
    }

    pub fn from_id(id: usize) -> Self {
        GeneratorSymbol { edge: id / 2 + 1, primed: id % 2 == 1 }
    }

    pub fn name(self) -> String {
        if self.primed {
            format!("g{}p", self.edge)
        } else {
            format!("g{}", self.edge)
        }
    }
}

/// Relator templates for one vertex kind.
///
/// Template syntax: each slot is a lowercase letter; `x'` is the primed
/// generator and `^-1` inverts. `[X, Y]` is a commutator, `<X, Y>` the cusp
/// relator, `X = Y` stands for `X Y^-1`, anything else is a plain word.
#[derive(Clone, Debug)]
pub struct RelationSchema {
    pub kind: VertexKind,
    /// Template letter for each slot of `kind.slots()`.
    pub letters: &'static [char],
    pub templates: &'static [&'static str],
}

const ONE_POINT: &[&str] = &["a = a'"];

const TWO_POINT_LINE_CONIC: &[&str] = &["<t, c>", "<t', c>", "<t^-1 t' t, c>", "c' = c t' t c t^-1 t'^-1 c^-1"];

const TWO_POINT_CONIC_LINE: &[&str] = &["<c', t>", "<c', t'>", "<c', t^-1 t' t>", "c = t' t c' t^-1 t'^-1"];

const THREE_POINT_GENERIC: &[&str] = &[
    "[p, q]",
    "[p', q]",
    "[p, q^-1 q' q]",
    "[p', q^-1 q' q]",
    "<l, q>",
    "<l', q>",
    "<l^-1 l' l, q>",
    "q' = q l' l q l^-1 l'^-1 q^-1",
    "<l, p>",
    "<l', p>",
    "<l^-1 l' l, p>",
    "p' = p l' l p l^-1 l'^-1 p^-1",
];

const THREE_POINT_CONIC_LINES: &[&str] = &[
    "<a, c>",
    "<a', c>",
    "<a^-1 a' a, c>",
    "<c', b>",
    "<c', b'>",
    "<c', b^-1 b' b>",
    "b' b c' b^-1 b'^-1 = c a' a c a^-1 a'^-1 c^-1",
    "[c a c^-1, b]",
    "[c a c^-1, b']",
    "[c a' c^-1, b]",
    "[c a' c^-1, b']",
];

const THREE_POINT_VERONESE: &[&str] = &[
    "<p', l>",
    "<p', l'>",
    "<p', l^-1 l' l>",
    "p = l' l p' l^-1 l'^-1",
    "<q, l' l p' l p'^-1 l^-1 l'^-1>",
    "<q, l' l p' l' p'^-1 l^-1 l'^-1>",
    "<q, l' l p' l^-1 l' l p'^-1 l^-1 l'^-1>",
    "q' = q l' l p' l' l p'^-1 l^-1 l'^-1 q l' l p' l^-1 l'^-1 p'^-1 l^-1 l'^-1 q^-1",
    "[p, q]",
    "[p, q']",
    "[p', q]",
    "[p', q']",
];

const THREE_POINT_CAYLEY: &[&str] = &[
    "b = b'",
    "[a', b'^-1 c b']",
    "[a', b'^-1 c^-1 c' c b']",
    "[a, b'^-1 c b']",
    "[a, b'^-1 c^-1 c' c b']",
    "<a, b'>",
    "<a', b'>",
    "<a'^-1 a a', b'>",
    "b' = a^-1 a'^-1 b'^-1 c' c b' b b'^-1 c^-1 c'^-1 b' a' a",
    "<b' b b'^-1, c>",
    "<b' b b'^-1, c'>",
    "<b' b b'^-1, c' c c'^-1>",
];

const FOUR_POINT: &[&str] = &[
    "<a', b>",
    "<a', b'>",
    "<a', b^-1 b' b>",
    "<c, d>",
    "<c', d>",
    "<c^-1 c' c, d>",
    "[b' b a' b^-1 b'^-1, d]",
    "[b' b a' b^-1 b'^-1, c^-1 c'^-1 d^-1 d' d c' c]",
    "<a, b>",
    "<a, b'>",
    "<a, b^-1 b' b>",
    "<c, d^-1 d' d>",
    "<c', d^-1 d' d>",
    "<c^-1 c' c, d^-1 d' d>",
    "[b' b a b^-1 b'^-1, d^-1 d' d]",
    "[b' b a b^-1 b'^-1, c^-1 c'^-1 d^-1 d'^-1 d d' d c' c]",
    "b' b a' b a'^-1 b^-1 b'^-1 = d c' d^-1",
    "b' b a' b' a'^-1 b^-1 b'^-1 = d c' c c'^-1 d^-1",
    "b' b a b a^-1 b^-1 b'^-1 = d^-1 d' d c' d^-1 d'^-1 d",
    "b' b a b' a^-1 b^-1 b'^-1 = d^-1 d' d c' c c'^-1 d^-1 d'^-1 d",
];

const FOUR_POINT_FAN: &[&str] = &[
    "[b, c]",
    "[b', c]",
    "[a, c]",
    "[a', c]",
    "<a, b>",
    "<a', b>",
    "<a^-1 a' a, b>",
    "<c', d>",
    "<c', d'>",
    "<c', d^-1 d' d>",
    "[c b' c^-1, d' d c' d^-1 d'^-1]",
    "[b a' a b a^-1 a'^-1 b^-1, c^-1 d' d c' d^-1 d'^-1 c]",
    "[b a b^-1, c^-1 d' d c' d^-1 d'^-1 c]",
    "<c^-1 b' c, d>",
    "<c^-1 b' c, d'>",
    "<c^-1 b' c, d^-1 d' d>",
    "b a' a b a^-1 a'^-1 b^-1 = c^-1 d' d c b' c^-1 d^-1 d'^-1 c",
    "c = d' d c' d^-1 d'^-1",
    "[b a b^-1, c^-1 d c]",
    "[b a' b^-1, c^-1 d c]",
    "[b a b^-1, c^-1 d' c]",
    "[b a' b^-1, c^-1 d' c]",
];

const FIVE_POINT: &[&str] = &[
    "[c, d]",
    "[c', d]",
    "<d', e>",
    "<d', e'>",
    "<d', e^-1 e' e>",
    "<b, d>",
    "<b', d>",
    "<b^-1 b' b, d>",
    "[d c d^-1, e' e d' e^-1 e'^-1]",
    "[d c' d^-1, e' e d' e^-1 e'^-1]",
    "d b' b d b^-1 b'^-1 d^-1 = e' e d' e^-1 e'^-1",
    "[a, d]",
    "[a', d]",
    "[a, e' e d' e^-1 e'^-1]",
    "[a', e' e d' e^-1 e'^-1]",
    "<a', b>",
    "<a', b'>",
    "<a', b^-1 b' b>",
    "<d c d^-1, e>",
    "<d c' d^-1, e>",
    "<d c^-1 c' c d^-1, e>",
    "b' b a' b a'^-1 b^-1 b'^-1 = d^-1 e d c' d^-1 e^-1 d",
    "b' b a' b' a'^-1 b^-1 b'^-1 = d^-1 e d c' c c'^-1 d^-1 e^-1 d",
    "[b' b a' b^-1 b'^-1, d^-1 e d]",
    "[c' c b' b a' b^-1 b'^-1 c^-1 c'^-1, d^-1 e^-1 e' e d]",
    "<a, b>",
    "<a, b'>",
    "<a, b^-1 b' b>",
    "<d c d^-1, e^-1 e' e>",
    "<d c' d^-1, e^-1 e' e>",
    "<d c^-1 c' c d^-1, e^-1 e' e>",
    "b' b a b a^-1 b^-1 b'^-1 = d^-1 e^-1 e' e d c' d^-1 e^-1 e'^-1 e d",
    "b' b a b' a^-1 b^-1 b'^-1 = d^-1 e^-1 e' e d c' c c'^-1 d^-1 e^-1 e'^-1 e d",
    "[b' b a b^-1 b'^-1, d^-1 e^-1 e' e d]",
    "[c' c b' b a b^-1 b'^-1 c^-1 c'^-1, d^-1 e^-1 e'^-1 e e' e d]",
];

/// Every shipped schema, one per [`VertexKind`].
pub fn schema_registry() -> Vec<RelationSchema> {
    VertexKind::ALL.iter().map(|&k| schema(k)).collect()
}

pub fn schema(kind: VertexKind) -> RelationSchema {
    let (letters, templates): (&'static [char], &'static [&'static str]) = match kind {
        VertexKind::OnePoint => (&['a'], ONE_POINT),
        VertexKind::TwoPointLineConic => (&['t', 'c'], TWO_POINT_LINE_CONIC),
        VertexKind::TwoPointConicLine => (&['c', 't'], TWO_POINT_CONIC_LINE),
        VertexKind::ThreePointGeneric => (&['l', 'p', 'q'], THREE_POINT_GENERIC),
        VertexKind::ThreePointConicLines => (&['a', 'c', 'b'], THREE_POINT_CONIC_LINES),
        VertexKind::ThreePointVeronese => (&['p', 'l', 'q'], THREE_POINT_VERONESE),
        VertexKind::ThreePointCayley => (&['a', 'b', 'c'], THREE_POINT_CAYLEY),
        VertexKind::FourPointStandard => (&['a', 'b', 'c', 'd'], FOUR_POINT),
        VertexKind::FourPointFan => (&['a', 'b', 'c', 'd'], FOUR_POINT_FAN),
        VertexKind::FivePoint => (&['a', 'b', 'c', 'd', 'e'], FIVE_POINT),
    };
    RelationSchema { kind, letters, templates }
}

/// Bracket shape of a relator: `[x, y]` or `<x, y>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TemplateForm {
    Commutator,
    Triple,
}

impl RelationSchema {
    /// Instantiate every template with slot `i` bound to `edges[i]`.
    pub fn instantiate(&self, edges: &[usize]) -> Result<Vec<Word>, GenerateError> {
        self.instantiate_parts(edges).map(|v| v.into_iter().map(|(w, _)| w).collect())
    }

    /// Like [`instantiate`](Self::instantiate), keeping the two bracket
    /// entries of commutators and cusp relators.
    pub fn instantiate_parts(&self, edges: &[usize]) -> Result<Vec<Instantiated>, GenerateError> {
        if edges.len() != self.letters.len() {
            return Err(GenerateError::RoleArityMismatch {
                kind: self.kind,
                expected: self.letters.len(),
                found: edges.len(),
            });
        }
        let bind = |c: char| self.letters.iter().position(|&l| l == c).map(|i| edges[i]);
        self.templates.iter().map(|t| instantiate_template(t, &bind)).collect()
    }
}

fn template_word(s: &str, bind: &dyn Fn(char) -> Option<usize>) -> Word {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        let mut chars = tok.chars();
        let c = chars.next().expect("nonempty token");
        let rest: String = chars.collect();
        let (primed, rest) = match rest.strip_prefix('\'') {
            Some(r) => (true, r),
            None => (false, rest.as_str()),
        };
        let inverse = match rest {
            "" => false,
            "^-1" => true,
            _ => panic!("bad template token `{tok}`"),
        };
        let edge = bind(c).unwrap_or_else(|| panic!("template letter `{c}` has no slot"));
        letters.push(Letter::new(GeneratorSymbol { edge, primed }.id(), inverse));
    }
    Word::new(letters)
}

type Instantiated = (Word, Option<(TemplateForm, Word, Word)>);

fn instantiate_template(t: &str, bind: &dyn Fn(char) -> Option<usize>) -> Result<Instantiated, GenerateError> {
    let t = t.trim();
    let bracket = |inner: &str| {
        let (x, y) = inner.split_once(',').expect("bracket template has two entries");
        (template_word(x, bind), template_word(y, bind))
    };
    Ok(if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let (x, y) = bracket(inner);
        (Word::commutator(&x, &y), Some((TemplateForm::Commutator, x, y)))
    } else if let Some(inner) = t.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        let (x, y) = bracket(inner);
        (Word::triple(&x, &y), Some((TemplateForm::Triple, x, y)))
    } else if let Some((l, r)) = t.split_once('=') {
        (template_word(l, bind).concat(&template_word(r, bind).inverse()), None)
    } else {
        (template_word(t, bind), None)
    })
}

/// Where a relator came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Vertex { id: u32, kind: VertexKind, template: usize },
    Parasitic(usize, usize),
    Projective,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Vertex { id, kind, .. } => write!(f, "vertex {id} ({kind})"),
            Provenance::Parasitic(a, b) => write!(f, "parasitic pair ({a}, {b})"),
            Provenance::Projective => write!(f, "projective relation"),
        }
    }
}

/// The map of each generator to the transposition of its edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricImage {
    pub n: usize,
    pub map: Vec<Permutation>,
}

impl SymmetricImage {
    pub fn hom(&self) -> PermutationHom {
        PermutationHom::new(self.n, self.map.clone())
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedPresentation {
    pub presentation: Presentation,
    pub image: SymmetricImage,
    pub provenance: Vec<Provenance>,
    /// Bracket entries of commutator and cusp relators, parallel to relators.
    pub brackets: Vec<Option<(TemplateForm, Word, Word)>>,
    pub projective: bool,
}

impl GeneratedPresentation {
    pub fn dump(&self) -> String {
        let comments: Vec<String> = self.provenance.iter().map(|p| p.to_string()).collect();
        self.presentation.dump(Some(&comments))
    }
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("no schema for vertex kind {0}")]
    MissingSchema(VertexKind),
    #[error("{kind} takes {expected} edges, got {found}")]
    RoleArityMismatch { kind: VertexKind, expected: usize, found: usize },
    #[error("degeneration is invalid:\n{0}")]
    Invalid(degen::ValidationReport),
}

pub fn generator_names(m: usize) -> Vec<String> {
    (0..2 * m).map(|i| GeneratorSymbol::from_id(i).name()).collect()
}

/// `g{m}p g{m} ... g1p g1`
pub fn projective_relator(m: usize) -> Word {
    let mut v = Vec::new();
    for j in (1..=m).rev() {
        v.push(Letter::pos(GeneratorSymbol { edge: j, primed: true }.id()));
        v.push(Letter::pos(GeneratorSymbol { edge: j, primed: false }.id()));
    }
    Word::new(v)
}

/// Build the van Kampen presentation of `d`.
///
/// Relators are emitted vertex by vertex in ascending id, then four
/// commutators per parasitic pair in lexicographic order, then (if
/// `projective`) the projective relator.
pub fn generate(d: &PlanarDegeneration, projective: bool) -> Result<GeneratedPresentation, GenerateError> {
    let report = degen::validate(d);
    if !report.ok {
        return Err(GenerateError::Invalid(report));
    }
    let m = d.m();
    let mut relators = Vec::new();
    let mut provenance = Vec::new();
    let mut brackets = Vec::new();

    let mut vertices: Vec<_> = d.vertices.iter().collect();
    vertices.sort_by_key(|v| v.id);
    for v in vertices {
        let s = schema(v.kind);
        let edges = v.slot_edges().ok_or(GenerateError::RoleArityMismatch {
            kind: v.kind,
            expected: v.kind.arity(),
            found: v.roles.len(),
        })?;
        for (i, (w, parts)) in s.instantiate_parts(&edges)?.into_iter().enumerate() {
            relators.push(w.cyclically_reduced());
            provenance.push(Provenance::Vertex { id: v.id, kind: v.kind, template: i });
            brackets.push(parts);
        }
    }
    for (a, b) in degen::parasitic_pairs(d) {
        for pa in [false, true] {
            for pb in [false, true] {
                let x = Word::gen(GeneratorSymbol { edge: a, primed: pa }.id());
                let y = Word::gen(GeneratorSymbol { edge: b, primed: pb }.id());
                relators.push(Word::commutator(&x, &y));
                provenance.push(Provenance::Parasitic(a, b));
                brackets.push(Some((TemplateForm::Commutator, x, y)));
            }
        }
    }
    if projective {
        relators.push(projective_relator(m).cyclically_reduced());
        provenance.push(Provenance::Projective);
        brackets.push(None);
    }

    let mut map = Vec::with_capacity(2 * m);
    for j in 1..=m {
        let t = degen::edge_transposition(d, j).expect("validated edge");
        map.push(t.clone());
        map.push(t);
    }
    // Presentation::new drops empty relators; keep parallel vectors aligned
    let keep: Vec<bool> = relators.iter().map(|r| !r.is_empty()).collect();
    let relators = retain_aligned(relators, &keep);
    let provenance = retain_aligned(provenance, &keep);
    let brackets = retain_aligned(brackets, &keep);
    Ok(GeneratedPresentation {
        presentation: Presentation { names: generator_names(m), relators },
        image: SymmetricImage { n: d.n, map },
        provenance,
        brackets,
        projective,
    })
}

fn retain_aligned<T>(v: Vec<T>, keep: &[bool]) -> Vec<T> {
    v.into_iter().zip(keep).filter(|(_, k)| **k).map(|(x, _)| x).collect()
}

/// True iff every relator maps to the identity permutation.
pub fn check_image_consistency(gp: &GeneratedPresentation) -> bool {
    let h = gp.image.hom();
    gp.presentation.relators.iter().all(|r| h.eval(r).is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        generator_names(5)
    }

    fn w(s: &str) -> Word {
        crate::fpgroup::parse_word(s, &names()).unwrap()
    }

    #[test]
    fn generator_ids() {
        assert_eq!(GeneratorSymbol { edge: 1, primed: false }.id(), 0);
        assert_eq!(GeneratorSymbol { edge: 3, primed: true }.id(), 5);
        assert_eq!(GeneratorSymbol::from_id(5).name(), "g3p");
    }

    #[test]
    fn one_point_at_edge_four() {
        let r = schema(VertexKind::OnePoint).instantiate(&[4]).unwrap();
        assert_eq!(r, vec![w("g4 g4p^-1")]);
    }

    #[test]
    fn two_point_line_conic() {
        let r = schema(VertexKind::TwoPointLineConic).instantiate(&[1, 2]).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r[0], w("<g1, g2>"));
        assert_eq!(r[1], w("<g1p, g2>"));
        assert_eq!(r[2], w("<g1^-1 g1p g1, g2>"));
        assert_eq!(r[3], w("g2p g2 g1p g1 g2^-1 g1^-1 g1p^-1 g2^-1"));
    }

    #[test]
    fn every_template_instantiates() {
        for s in schema_registry() {
            let edges: Vec<usize> = (1..=s.kind.arity()).collect();
            let r = s.instantiate(&edges).unwrap();
            assert_eq!(r.len(), s.templates.len());
            assert!(r.iter().all(|w| !w.is_empty()), "{}", s.kind);
        }
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            schema(VertexKind::FivePoint).instantiate(&[1, 2]),
            Err(GenerateError::RoleArityMismatch { .. })
        ));
    }

    #[test]
    fn projective_relator_order() {
        assert_eq!(projective_relator(2), w("g2p g2 g1p g1"));
    }
}
