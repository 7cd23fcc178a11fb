//! Planar degenerations: planes, numbered intersection lines and singular vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::Permutation;

/// Singularity type of a vertex together with the relation schema it selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    #[serde(rename = "one-point")]
    OnePoint,
    /// Cusps on the line side: `<t, c>`, `<t', c>`, ... and `c'` defined.
    #[serde(rename = "two-point/line-conic")]
    TwoPointLineConic,
    /// Cusps on the primed conic: `<c', t>`, ... and `c` defined.
    #[serde(rename = "two-point/conic-line")]
    TwoPointConicLine,
    /// A line tangent to two conics.
    #[serde(rename = "three-point/line-two-conics")]
    ThreePointGeneric,
    /// A conic tangent to two lines.
    #[serde(rename = "three-point/conic-two-lines")]
    ThreePointConicLines,
    #[serde(rename = "three-point/veronese")]
    ThreePointVeronese,
    #[serde(rename = "three-point/cayley")]
    ThreePointCayley,
    #[serde(rename = "four-point")]
    FourPointStandard,
    #[serde(rename = "four-point/fan")]
    FourPointFan,
    #[serde(rename = "five-point")]
    FivePoint,
}

impl VertexKind {
    pub const ALL: [VertexKind; 10] = [
        VertexKind::OnePoint,
        VertexKind::TwoPointLineConic,
        VertexKind::TwoPointConicLine,
        VertexKind::ThreePointGeneric,
        VertexKind::ThreePointConicLines,
        VertexKind::ThreePointVeronese,
        VertexKind::ThreePointCayley,
        VertexKind::FourPointStandard,
        VertexKind::FourPointFan,
        VertexKind::FivePoint,
    ];

    pub fn arity(self) -> usize {
        self.slots().len()
    }

    /// Role names in template order.
    pub fn slots(self) -> &'static [&'static str] {
        match self {
            VertexKind::OnePoint => &["edge"],
            VertexKind::TwoPointLineConic => &["line", "conic"],
            VertexKind::TwoPointConicLine => &["conic", "line"],
            VertexKind::ThreePointGeneric => &["line", "conic1", "conic2"],
            VertexKind::ThreePointConicLines => &["line1", "conic", "line2"],
            VertexKind::ThreePointVeronese => &["conic1", "line", "conic2"],
            VertexKind::ThreePointCayley => &["e1", "e2", "e3"],
            VertexKind::FourPointStandard | VertexKind::FourPointFan => &["e1", "e2", "e3", "e4"],
            VertexKind::FivePoint => &["e1", "e2", "e3", "e4", "e5"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VertexKind::OnePoint => "one-point",
            VertexKind::TwoPointLineConic => "two-point/line-conic",
            VertexKind::TwoPointConicLine => "two-point/conic-line",
            VertexKind::ThreePointGeneric => "three-point/line-two-conics",
            VertexKind::ThreePointConicLines => "three-point/conic-two-lines",
            VertexKind::ThreePointVeronese => "three-point/veronese",
            VertexKind::ThreePointCayley => "three-point/cayley",
            VertexKind::FourPointStandard => "four-point",
            VertexKind::FourPointFan => "four-point/fan",
            VertexKind::FivePoint => "five-point",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub index: usize,
    /// Plane indices; a valid edge has exactly two distinct entries.
    pub planes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: u32,
    pub incident: Vec<usize>,
    pub kind: VertexKind,
    /// Role name to edge index.
    #[serde(default)]
    pub roles: BTreeMap<String, usize>,
}

impl Vertex {
    /// Edges in template slot order. For a one-point the role may be omitted.
    pub fn slot_edges(&self) -> Option<Vec<usize>> {
        if self.kind == VertexKind::OnePoint && self.roles.is_empty() {
            return (self.incident.len() == 1).then(|| self.incident.clone());
        }
        self.kind.slots().iter().map(|s| self.roles.get(*s).copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarDegeneration {
    pub name: String,
    #[serde(rename = "planes")]
    pub n: usize,
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Element {
    Case,
    Edge(usize),
    Vertex(u32),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Case => write!(f, "case"),
            Element::Edge(i) => write!(f, "edge {i}"),
            Element::Vertex(v) => write!(f, "vertex {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub message: String,
    pub element: Element,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{}: {} ({})", v.rule, v.message, v.element)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum DegenError {
    #[error("vertex {vertex}: kind {kind} has arity {expected} but {found} incident edges")]
    KindMismatch { vertex: u32, kind: VertexKind, expected: usize, found: usize },
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl PlanarDegeneration {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DegenError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| DegenError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text).map_err(|source| DegenError::Json { path: path.display().to_string(), source })
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, j: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.index == j)
    }

    /// Vertices containing each edge.
    fn endpoints(&self) -> BTreeMap<usize, BTreeSet<u32>> {
        let mut map: BTreeMap<usize, BTreeSet<u32>> = self.edges.iter().map(|e| (e.index, BTreeSet::new())).collect();
        for v in &self.vertices {
            for &e in &v.incident {
                map.entry(e).or_default().insert(v.id);
            }
        }
        map
    }
}

/// Check every structural invariant; violations are collected, never thrown.
pub fn validate(d: &PlanarDegeneration) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |rule, message: String, element| out.push(Violation { rule, message, element });

    if d.n == 0 {
        push("planes-positive", "a degeneration needs at least one plane".into(), Element::Case);
    }

    let mut seen_index = BTreeSet::new();
    let mut seen_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in &d.edges {
        if !seen_index.insert(e.index) {
            push("edge-index-unique", format!("edge index {} declared twice", e.index), Element::Edge(e.index));
        }
        let distinct: BTreeSet<usize> = e.planes.iter().copied().collect();
        if distinct.len() > 2 {
            push(
                "no-three-planes-in-a-line",
                format!("edge {} lies on {} planes", e.index, distinct.len()),
                Element::Edge(e.index),
            );
        } else if distinct.len() < 2 || e.planes.len() != 2 {
            push(
                "edge-two-planes",
                format!("edge {} must join two distinct planes, got {:?}", e.index, e.planes),
                Element::Edge(e.index),
            );
        }
        for &p in &distinct {
            if p == 0 || p > d.n {
                push("plane-range", format!("plane {p} outside 1..{}", d.n), Element::Edge(e.index));
            }
        }
        if distinct.len() == 2 {
            let v: Vec<usize> = distinct.into_iter().collect();
            if let Some(prev) = seen_pair.insert((v[0], v[1]), e.index) {
                push(
                    "no-doubled-lines",
                    format!("edges {prev} and {} both join planes {} and {}", e.index, v[0], v[1]),
                    Element::Edge(e.index),
                );
            }
        }
    }
    let m = d.edges.len();
    for j in 1..=m {
        if !seen_index.contains(&j) {
            push("edge-index-sequence", format!("edge index {j} missing from 1..{m}"), Element::Case);
        }
    }

    let mut seen_vertex = BTreeSet::new();
    for v in &d.vertices {
        if !seen_vertex.insert(v.id) {
            push("vertex-id-unique", format!("vertex id {} declared twice", v.id), Element::Vertex(v.id));
        }
        for &e in &v.incident {
            if !seen_index.contains(&e) {
                push("vertex-unknown-edge", format!("incident edge {e} is not declared"), Element::Vertex(v.id));
            }
        }
        let distinct: BTreeSet<usize> = v.incident.iter().copied().collect();
        if distinct.len() != v.incident.len() {
            push("vertex-repeated-edge", "an edge is listed twice".into(), Element::Vertex(v.id));
        }
        if v.incident.len() != v.kind.arity() {
            push(
                "vertex-arity",
                format!("{} needs {} incident edges, found {}", v.kind, v.kind.arity(), v.incident.len()),
                Element::Vertex(v.id),
            );
        }
        match v.slot_edges() {
            None => push(
                "vertex-roles",
                format!("roles must name every slot of {}: {:?}", v.kind, v.kind.slots()),
                Element::Vertex(v.id),
            ),
            Some(edges) => {
                let assigned: BTreeSet<usize> = edges.iter().copied().collect();
                let extra = v.roles.keys().any(|k| !v.kind.slots().contains(&k.as_str()));
                if assigned != distinct || assigned.len() != edges.len() || extra {
                    push(
                        "vertex-roles",
                        format!("roles {:?} are not a bijection onto incident edges {:?}", v.roles, v.incident),
                        Element::Vertex(v.id),
                    );
                }
            }
        }
    }

    for (e, ends) in d.endpoints() {
        if seen_index.contains(&e) && ends.len() != 2 {
            push(
                "edge-endpoints",
                format!("edge {e} appears at {} vertices, expected 2", ends.len()),
                Element::Edge(e),
            );
        }
    }

    ValidationReport { ok: out.is_empty(), violations: out }
}

/// Arity of each vertex, keyed by vertex id.
pub fn classify(d: &PlanarDegeneration) -> Result<BTreeMap<u32, usize>, DegenError> {
    let mut out = BTreeMap::new();
    for v in &d.vertices {
        if v.kind.arity() != v.incident.len() {
            return Err(DegenError::KindMismatch {
                vertex: v.id,
                kind: v.kind,
                expected: v.kind.arity(),
                found: v.incident.len(),
            });
        }
        out.insert(v.id, v.incident.len());
    }
    Ok(out)
}

/// Pairs of edges `(a, b)`, `a < b`, that share no vertex.
pub fn parasitic_pairs(d: &PlanarDegeneration) -> BTreeSet<(usize, usize)> {
    let ends = d.endpoints();
    let mut out = BTreeSet::new();
    for (&a, va) in &ends {
        for (&b, vb) in ends.range(a + 1..) {
            if va.is_disjoint(vb) {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Pairs of edges meeting at some vertex.
pub fn incident_pairs(d: &PlanarDegeneration) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for v in &d.vertices {
        for &a in &v.incident {
            for &b in &v.incident {
                if a < b {
                    out.insert((a, b));
                }
            }
        }
    }
    out
}

/// The transposition of the two planes of edge `j`.
pub fn edge_transposition(d: &PlanarDegeneration, j: usize) -> Result<Permutation, DegenError> {
    let e = d.edge(j).ok_or(DegenError::UnknownEdge(j))?;
    match e.planes.as_slice() {
        &[a, b] if a != b && a >= 1 && b >= 1 && a <= d.n && b <= d.n => Ok(Permutation::transposition(d.n, a, b)),
        _ => Err(DegenError::UnknownEdge(j)),
    }
}
