//! Bookkeeping for braid monodromy factorizations.
//!
//! Only two shadows of a braid are tracked: its exponent sum and its strand
//! permutation. A factor `Z^e_{a b}` contributes `e` to the sum and the
//! transposition `(a b)` when `e` is odd; conjugation relabels the support.
//!
//! File format, one factor per line:
//!
//! ```text
//! # comment
//! labels: paired
//! strands: 8
//! scope: local
//! Z2 2' 3
//! Z3 (1 1') 2
//! Zbar2 2' 3' ^ Z2 3' (4 4')
//! Z1 2 2' ^ Z2 (1 1') 2 ; Z2 2' (4 4') ; Z-2 3 (4 4')
//! ```
//!
//! An operand is a strand label (`3`, `3'`) or a parenthesized pair of
//! labels for the compound supports `Z_{i, j j'}`, `Z_{i i', j}` and
//! `Z_{i i', j j'}`. Conjugators follow `^`, separated by `;`, applied in
//! the order written. `Zbar` marks a half-twist along the upper path; it
//! has the same shadows as `Z`. With `labels: plain` (the default) label
//! `k` is strand `k`; with `labels: paired` label `k` is strand `2k-1` and
//! `k'` is strand `2k`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::fpgroup::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrandLabel {
    pub index: u32,
    pub primed: bool,
}

impl fmt::Display for StrandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, if self.primed { "'" } else { "" })
    }
}

impl FromStr for StrandLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (digits, primed) = match s.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (s, false),
        };
        let index: u32 = digits.parse().map_err(|_| format!("bad strand label `{s}`"))?;
        if index == 0 {
            return Err(format!("strand labels start at 1, got `{s}`"));
        }
        Ok(StrandLabel { index, primed })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Single(StrandLabel),
    Pair(StrandLabel, StrandLabel),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Single(a) => write!(f, "{a}"),
            Operand::Pair(a, b) => write!(f, "({a} {b})"),
        }
    }
}

/// `Z^exponent_{left right}` conjugated by `conjugators` in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfTwistFactor {
    pub left: Operand,
    pub right: Operand,
    pub exponent: i32,
    pub bar: bool,
    pub conjugators: Vec<HalfTwistFactor>,
}

impl HalfTwistFactor {
    pub fn atomic(a: StrandLabel, b: StrandLabel, exponent: i32) -> Self {
        HalfTwistFactor {
            left: Operand::Single(a),
            right: Operand::Single(b),
            exponent,
            bar: false,
            conjugators: Vec::new(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!((self.left, self.right), (Operand::Single(_), Operand::Single(_)))
    }

    fn labels(&self) -> Vec<StrandLabel> {
        let mut v = Vec::new();
        for o in [self.left, self.right] {
            match o {
                Operand::Single(a) => v.push(a),
                Operand::Pair(a, b) => v.extend([a, b]),
            }
        }
        v
    }

    fn with_support(&self, a: StrandLabel, b: StrandLabel, inner: Option<HalfTwistFactor>) -> HalfTwistFactor {
        let mut conjugators: Vec<HalfTwistFactor> = inner.into_iter().collect();
        conjugators.extend(self.conjugators.iter().cloned());
        HalfTwistFactor {
            left: Operand::Single(a),
            right: Operand::Single(b),
            exponent: self.exponent,
            bar: self.bar,
            conjugators,
        }
    }
}

impl fmt::Display for HalfTwistFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}{} {} {}", if self.bar { "bar" } else { "" }, self.exponent, self.left, self.right)?;
        for (i, c) in self.conjugators.iter().enumerate() {
            write!(f, "{}{c}", if i == 0 { " ^ " } else { " ; " })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum LabelMode {
    #[default]
    Plain,
    Paired,
}

impl LabelMode {
    pub fn strand(self, l: StrandLabel) -> Result<usize, BraidError> {
        match (self, l.primed) {
            (LabelMode::Plain, false) => Ok(l.index as usize),
            (LabelMode::Plain, true) => Err(BraidError::PrimedPlainLabel(l.to_string())),
            (LabelMode::Paired, false) => Ok(2 * l.index as usize - 1),
            (LabelMode::Paired, true) => Ok(2 * l.index as usize),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Scope {
    /// A factorization of the full twist on all strands.
    Full,
    /// The factors of one singular point.
    #[default]
    Local,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub p: usize,
    pub labels: LabelMode,
    pub scope: Scope,
    pub factors: Vec<HalfTwistFactor>,
    /// Lines marked `unresolved:`, kept verbatim.
    pub unresolved: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("no expansion for compound factor `{0}`")]
    UnknownCompound(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("strand {strand} outside 1..{p}")]
    StrandOutOfRange { strand: usize, p: usize },
    #[error("factor `{0}` repeats a strand")]
    RepeatedStrand(String),
    #[error("factor `{0}` must have a positive exponent")]
    InvalidExponent(String),
    #[error("primed label {0} needs `labels: paired`")]
    PrimedPlainLabel(String),
    #[error("file declares {declared} strands, {given} requested")]
    StrandMismatch { declared: usize, given: usize },
}

/// Rewrite compound factors as products of atomic ones.
///
/// * `Z^2_{i, j j'}` becomes `Z^2_{i j} Z^2_{i j'}`
/// * `Z^3_{i, j j'}` becomes `Z^3_{i j} (Z^3_{i j})^{Z_{j j'}} (Z^3_{i j})^{Z^-1_{j j'}}`
/// * `Z^2_{i i', j j'}` becomes the four node factors `Z^2_{i j} Z^2_{i j'} Z^2_{i' j} Z^2_{i' j'}`
///
/// and the mirrored `Z_{i i', j}` forms likewise.
pub fn expand(f: &HalfTwistFactor) -> Result<Vec<HalfTwistFactor>, BraidError> {
    if f.exponent < 0 && !matches!((f.left, f.right), (Operand::Single(_), Operand::Single(_))) {
        // the inverse of a product, factor by factor in reverse
        let mut pos = f.clone();
        pos.exponent = -f.exponent;
        let mut out = expand(&pos).map_err(|_| BraidError::UnknownCompound(f.to_string()))?;
        out.reverse();
        for a in &mut out {
            a.exponent = -a.exponent;
        }
        return Ok(out);
    }
    let unknown = || BraidError::UnknownCompound(f.to_string());
    Ok(match (f.left, f.right, f.exponent) {
        (Operand::Single(_), Operand::Single(_), _) => vec![f.clone()],
        (Operand::Single(i), Operand::Pair(j, jp), 2) => vec![f.with_support(i, j, None), f.with_support(i, jp, None)],
        (Operand::Pair(i, ip), Operand::Single(j), 2) => vec![f.with_support(i, j, None), f.with_support(ip, j, None)],
        (Operand::Single(i), Operand::Pair(j, jp), 3) => vec![
            f.with_support(i, j, None),
            f.with_support(i, j, Some(HalfTwistFactor::atomic(j, jp, 1))),
            f.with_support(i, j, Some(HalfTwistFactor::atomic(j, jp, -1))),
        ],
        (Operand::Pair(i, ip), Operand::Single(j), 3) => vec![
            f.with_support(i, j, None),
            f.with_support(i, j, Some(HalfTwistFactor::atomic(i, ip, 1))),
            f.with_support(i, j, Some(HalfTwistFactor::atomic(i, ip, -1))),
        ],
        (Operand::Pair(i, ip), Operand::Pair(j, jp), 2) => vec![
            f.with_support(i, j, None),
            f.with_support(i, jp, None),
            f.with_support(ip, j, None),
            f.with_support(ip, jp, None),
        ],
        _ => return Err(unknown()),
    })
}

/// Sum of exponents over fully expanded factors.
pub fn exponent_sum(fz: &Factorization) -> Result<i64, BraidError> {
    let mut total = 0i64;
    for f in &fz.factors {
        for a in expand(f)? {
            total += a.exponent as i64;
        }
    }
    Ok(total)
}

/// Strand permutation of a single (possibly compound) factor.
pub fn factor_permutation(f: &HalfTwistFactor, p: usize, labels: LabelMode) -> Result<Permutation, BraidError> {
    let mut out = Permutation::identity(p);
    for a in expand(f)? {
        let (Operand::Single(x), Operand::Single(y)) = (a.left, a.right) else {
            unreachable!("expansion is atomic")
        };
        let mut t = if a.exponent % 2 != 0 {
            let (sx, sy) = (labels.strand(x)?, labels.strand(y)?);
            for s in [sx, sy] {
                if s > p {
                    return Err(BraidError::StrandOutOfRange { strand: s, p });
                }
            }
            Permutation::transposition(p, sx, sy)
        } else {
            Permutation::identity(p)
        };
        let mut sigma = Permutation::identity(p);
        for c in &a.conjugators {
            sigma = sigma.then(&factor_permutation(c, p, labels)?);
        }
        t = t.conjugate_by(&sigma);
        out = out.then(&t);
    }
    Ok(out)
}

/// Product of the factor permutations, left to right.
pub fn induced_permutation(fz: &Factorization) -> Result<Permutation, BraidError> {
    let mut out = Permutation::identity(fz.p);
    for f in &fz.factors {
        out = out.then(&factor_permutation(f, fz.p, fz.labels)?);
    }
    Ok(out)
}

fn check_factor(f: &HalfTwistFactor, p: usize, labels: LabelMode) -> Result<(), BraidError> {
    expand(f)?;
    let ls = f.labels();
    let mut strands = Vec::new();
    for l in &ls {
        let s = labels.strand(*l)?;
        if s > p {
            return Err(BraidError::StrandOutOfRange { strand: s, p });
        }
        strands.push(s);
    }
    let mut sorted = strands.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != strands.len() {
        return Err(BraidError::RepeatedStrand(f.to_string()));
    }
    for c in &f.conjugators {
        check_factor(c, p, labels)?;
    }
    Ok(())
}

impl Factorization {
    pub fn parse(text: &str) -> Result<Factorization, BraidError> {
        let mut fz = Factorization { p: 0, labels: LabelMode::Plain, scope: Scope::Local, factors: Vec::new(), unresolved: Vec::new() };
        let mut declared = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            let perr = |msg: String| BraidError::Parse { line: no + 1, msg };
            if line.is_empty() {
                continue;
            }
            if let Some((key, val)) = line.split_once(':') {
                let val = val.trim();
                match key.trim() {
                    "labels" => {
                        fz.labels = match val {
                            "plain" => LabelMode::Plain,
                            "paired" => LabelMode::Paired,
                            _ => return Err(perr(format!("unknown label mode `{val}`"))),
                        }
                    }
                    "strands" => declared = Some(val.parse::<usize>().map_err(|_| perr(format!("bad strand count `{val}`")))?),
                    "scope" => {
                        fz.scope = match val {
                            "full" => Scope::Full,
                            "local" => Scope::Local,
                            _ => return Err(perr(format!("unknown scope `{val}`"))),
                        }
                    }
                    "unresolved" => fz.unresolved.push(val.to_string()),
                    other => return Err(perr(format!("unknown header `{other}`"))),
                }
                continue;
            }
            let mut parts = line.split(['^', ';']);
            let head = parts.next().unwrap();
            let mut f = parse_factor(head).map_err(perr)?;
            if f.exponent < 1 {
                return Err(BraidError::InvalidExponent(f.to_string()));
            }
            if line.contains(';') && !line.contains('^') {
                return Err(perr("conjugators must follow `^`".into()));
            }
            for c in parts {
                f.conjugators.push(parse_factor(c).map_err(perr)?);
            }
            fz.factors.push(f);
        }
        fz.p = declared.unwrap_or(0);
        Ok(fz)
    }

    /// Fix the strand count, checking any declared value and every label.
    pub fn with_strands(mut self, p: usize) -> Result<Factorization, BraidError> {
        if self.p != 0 && self.p != p {
            return Err(BraidError::StrandMismatch { declared: self.p, given: p });
        }
        self.p = p;
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<(), BraidError> {
        for f in &self.factors {
            check_factor(f, self.p, self.labels)?;
        }
        Ok(())
    }
}

fn parse_factor(s: &str) -> Result<HalfTwistFactor, String> {
    let s = s.trim();
    let rest = s.strip_prefix('Z').ok_or_else(|| format!("factor must start with `Z`: `{s}`"))?;
    let (bar, rest) = match rest.strip_prefix("bar") {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let end = rest.find(|c: char| c.is_whitespace()).ok_or_else(|| format!("missing operands in `{s}`"))?;
    let exponent: i32 = rest[..end].parse().map_err(|_| format!("bad exponent in `{s}`"))?;
    if exponent == 0 {
        return Err(format!("zero exponent in `{s}`"));
    }
    let ops = operands(&rest[end..])?;
    let [left, right] = ops.as_slice() else {
        return Err(format!("expected two operands in `{s}`"));
    };
    Ok(HalfTwistFactor { left: *left, right: *right, exponent, bar, conjugators: Vec::new() })
}

fn operands(s: &str) -> Result<Vec<Operand>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or_else(|| format!("unclosed `(` in `{s}`"))?;
            let labels: Vec<&str> = r[..close].split_whitespace().collect();
            let [a, b] = labels.as_slice() else {
                return Err(format!("a compound operand holds two labels: `{s}`"));
            };
            out.push(Operand::Pair(a.parse()?, b.parse()?));
            rest = r[close + 1..].trim_start();
        } else {
            let end = rest.find(|c: char| c.is_whitespace()).unwrap_or(rest.len());
            out.push(Operand::Single(rest[..end].parse()?));
            rest = rest[end..].trim_start();
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub strands: usize,
    pub scope: Scope,
    pub factors: usize,
    pub atomic_factors: usize,
    pub exponent_sum: i64,
    /// `p(p-1)` for full factorizations.
    pub expected_sum: Option<i64>,
    pub permutation: String,
    pub permutation_is_identity: bool,
    pub unresolved: Vec<String>,
    pub passed: bool,
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strands: {}", self.strands)?;
        writeln!(f, "scope: {:?}", self.scope)?;
        writeln!(f, "factors: {} ({} after expansion)", self.factors, self.atomic_factors)?;
        match self.expected_sum {
            Some(e) => writeln!(f, "exponent sum: {} (expected {e})", self.exponent_sum)?,
            None => writeln!(f, "exponent sum: {}", self.exponent_sum)?,
        }
        writeln!(f, "permutation: {}", self.permutation)?;
        for u in &self.unresolved {
            writeln!(f, "unresolved: {u}")?;
        }
        writeln!(f, "verdict: {}", if self.passed { "pass" } else { "FAIL" })
    }
}

/// Exponent sum and permutation checks. A full factorization passes iff its
/// exponent sum is `p(p-1)` and its permutation is trivial; a local one
/// passes once it parses and expands.
pub fn audit(fz: &Factorization) -> Result<AuditReport, BraidError> {
    fz.check()?;
    let sum = exponent_sum(fz)?;
    let perm = induced_permutation(fz)?;
    let atomic = fz.factors.iter().map(|f| expand(f).map(|v| v.len())).sum::<Result<usize, _>>()?;
    let expected = (fz.scope == Scope::Full).then(|| (fz.p * fz.p.saturating_sub(1)) as i64);
    let passed = match expected {
        Some(e) => sum == e && perm.is_identity(),
        None => true,
    };
    Ok(AuditReport {
        strands: fz.p,
        scope: fz.scope,
        factors: fz.factors.len(),
        atomic_factors: atomic,
        exponent_sum: sum,
        expected_sum: expected,
        permutation: perm.to_string(),
        permutation_is_identity: perm.is_identity(),
        unresolved: fz.unresolved.clone(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(line: &str, p: usize, labels: &str) -> Factorization {
        Factorization::parse(&format!("labels: {labels}\n{line}")).unwrap().with_strands(p).unwrap()
    }

    #[test]
    fn node_compound() {
        let fz = one("Z2 1 (4 4')", 8, "paired");
        let parts = expand(&fz.factors[0]).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(exponent_sum(&fz).unwrap(), 4);
    }

    #[test]
    fn cusp_compound() {
        let fz = one("Z3 2' (3 3')", 6, "paired");
        let parts = expand(&fz.factors[0]).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|f| f.exponent == 3));
        assert_eq!(exponent_sum(&fz).unwrap(), 9);
    }

    #[test]
    fn atomic_is_fixed() {
        let fz = one("Z1 1 1'", 2, "paired");
        assert_eq!(expand(&fz.factors[0]).unwrap(), fz.factors);
        assert_eq!(induced_permutation(&fz).unwrap(), Permutation::transposition(2, 1, 2));
        let even = one("Z2 1 4", 4, "plain");
        assert!(induced_permutation(&even).unwrap().is_identity());
    }

    #[test]
    fn empty_factorization() {
        let fz = Factorization::parse("").unwrap().with_strands(3).unwrap();
        assert_eq!(exponent_sum(&fz).unwrap(), 0);
        assert!(induced_permutation(&fz).unwrap().is_identity());
    }

    #[test]
    fn conjugation_relabels() {
        // (1 2) conjugated by (2 3) is (1 3)
        let fz = one("Z1 1 2 ^ Z1 2 3", 3, "plain");
        assert_eq!(induced_permutation(&fz).unwrap(), Permutation::transposition(3, 1, 3));
        assert_eq!(exponent_sum(&fz).unwrap(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Factorization::parse("Z0 1 2"), Err(BraidError::Parse { .. })));
        assert!(matches!(Factorization::parse("Z-1 1 2"), Err(BraidError::InvalidExponent(_))));
        assert!(matches!(
            Factorization::parse("Z1 1' 2").unwrap().with_strands(3),
            Err(BraidError::PrimedPlainLabel(_))
        ));
        assert!(matches!(
            Factorization::parse("Z1 1 5").unwrap().with_strands(3),
            Err(BraidError::StrandOutOfRange { .. })
        ));
        assert!(matches!(
            Factorization::parse("Z4 1 (2 3)").unwrap().with_strands(3),
            Err(BraidError::UnknownCompound(_))
        ));
    }
}
