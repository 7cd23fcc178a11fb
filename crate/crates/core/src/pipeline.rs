//! End-to-end analysis: degeneration file to kernel invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{self, AuditReport, Factorization};
use crate::coset::{self, factorial, CosetError, EnumerationLimits, Verdict};
use crate::degen::{self, DegenError, PlanarDegeneration};
use crate::fpgroup::{add_square_relators, parse_word, tietze_simplify, ParseError, Word, DEFAULT_TIETZE_BUDGET};
use crate::kernel::{self, AbelianElement, AbelianInvariants, KernelData};
use crate::vankampen::{self, GenerateError, GeneratedPresentation, TemplateForm};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Options {
    pub limits: EnumerationLimits,
    pub tietze_budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { limits: EnumerationLimits::default(), tietze_budget: DEFAULT_TIETZE_BUDGET }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid degeneration:\n{0}")]
    Invalid(degen::ValidationReport),
    #[error(transparent)]
    Degen(#[from] DegenError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error("relator {index} ({provenance}) does not map to the identity permutation")]
    InconsistentImage { index: usize, provenance: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Braid(#[from] braid::BraidError),
    #[error("{path}: {msg}")]
    Fixture { path: String, msg: String },
}

/// Invariants of the kernel of the squares quotient onto its permutation image.
#[derive(Clone, Debug, Serialize)]
pub struct KernelSummary {
    pub index: usize,
    pub schreier_generators: usize,
    pub relators: usize,
    pub invariants: AbelianInvariants,
    pub simplified_generators: usize,
    pub simplified_relators: usize,
    pub simplified_invariants: AbelianInvariants,
    pub tietze_budget_exhausted: bool,
    /// Raw and simplified invariants agree.
    pub agree: bool,
    pub torsion_2_power: bool,
}

impl fmt::Display for KernelSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (index {}, {} Schreier generators, {} relators; simplified to {} generators, {} relators{})",
            self.invariants,
            self.index,
            self.schreier_generators,
            self.relators,
            self.simplified_generators,
            self.simplified_relators,
            if self.tietze_budget_exhausted { ", budget exhausted" } else { "" }
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub case: String,
    pub planes: usize,
    pub lines: usize,
    pub generators: usize,
    pub relators: usize,
    pub affine_relators: usize,
    pub image: Vec<String>,
    pub image_consistent: bool,
    pub verdict: Verdict,
    pub kernel: KernelSummary,
    pub affine_kernel: KernelSummary,
    /// Filled by callers that probe elements or audit factorizations.
    pub probes: Vec<CaffProbe>,
    pub audits: Vec<AuditReport>,
    pub notes: Vec<String>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl AnalysisReport {
    /// IsoSymmetric iff the kernel invariants vanish.
    pub fn is_consistent(&self) -> bool {
        let iso = matches!(self.verdict, Verdict::IsoSymmetric { .. });
        let inconclusive = matches!(self.verdict, Verdict::Inconclusive { .. });
        self.image_consistent
            && self.kernel.agree
            && self.affine_kernel.agree
            && self.affine_surjects()
            && (inconclusive || iso == self.kernel.invariants.is_trivial())
    }

    /// The projective kernel abelianization is no larger than the affine
    /// one, as it must be for a quotient.
    pub fn affine_surjects(&self) -> bool {
        let (p, a) = (&self.kernel.invariants, &self.affine_kernel.invariants);
        self.kernel.index == self.affine_kernel.index
            && p.rank <= a.rank
            && p.rank + p.torsion.len() <= a.rank + a.torsion.len()
    }

    pub fn exit_code(&self) -> i32 {
        if !self.is_consistent() {
            1
        } else if matches!(self.verdict, Verdict::Inconclusive { .. })
            || self.kernel.tietze_budget_exhausted
            || self.affine_kernel.tietze_budget_exhausted
        {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case: {}", self.case)?;
        writeln!(f, "planes: {}, lines: {}", self.planes, self.lines)?;
        writeln!(
            f,
            "presentation: {} generators, {} relators ({} affine)",
            self.generators, self.relators, self.affine_relators
        )?;
        writeln!(f, "image: {}", self.image.join(", "))?;
        writeln!(f, "image consistent: {}", self.image_consistent)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(f, "kernel: {}", self.kernel)?;
        writeln!(f, "affine kernel: {}", self.affine_kernel)?;
        for p in &self.probes {
            write!(f, "probe: {p}")?;
        }
        for a in &self.audits {
            write!(f, "audit: {a}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        let t: Vec<String> = self.timings_ms.iter().map(|(k, v)| format!("{k} {v}ms")).collect();
        writeln!(f, "timings: {}", t.join(", "))
    }
}

/// Kernel of the squares quotient of `gp` onto the image of its generators.
pub fn kernel_of(gp: &GeneratedPresentation, budget: usize) -> Result<(KernelData, KernelSummary), PipelineError> {
    let sq = add_square_relators(&gp.presentation);
    let table = coset::table_from_hom(&sq, &gp.image.hom())?;
    let kd = kernel::reidemeister_schreier(&sq, &table).expect("hom tables are closed");
    let invariants = kd.abelianization_map().invariants.clone();
    let t = tietze_simplify(&kd.presentation, budget);
    let simplified_invariants = kernel::abelianization(&t.presentation);
    let summary = KernelSummary {
        index: table.len(),
        schreier_generators: kd.presentation.ngens(),
        relators: kd.presentation.relators.len(),
        agree: simplified_invariants == invariants,
        torsion_2_power: invariants.torsion_is_2_power(),
        invariants,
        simplified_generators: t.presentation.ngens(),
        simplified_relators: t.presentation.relators.len(),
        simplified_invariants,
        tietze_budget_exhausted: t.budget_exhausted,
    };
    Ok((kd, summary))
}

fn check_image(gp: &GeneratedPresentation) -> Result<(), PipelineError> {
    let h = gp.image.hom();
    match gp.presentation.relators.iter().position(|r| !h.eval(r).is_identity()) {
        None => Ok(()),
        Some(i) => Err(PipelineError::InconsistentImage { index: i, provenance: gp.provenance[i].to_string() }),
    }
}

/// Run the full analysis of one degeneration.
pub fn analyze(d: &PlanarDegeneration, opts: &Options) -> Result<AnalysisReport, PipelineError> {
    let mut timings = BTreeMap::new();
    let clock = Instant::now();
    let report = degen::validate(d);
    if !report.ok {
        return Err(PipelineError::Invalid(report));
    }
    degen::classify(d)?;
    let gp = vankampen::generate(d, true)?;
    let gpa = vankampen::generate(d, false)?;
    check_image(&gp)?;
    check_image(&gpa)?;
    timings.insert("generate".to_string(), clock.elapsed().as_millis());

    let clock = Instant::now();
    let (_, kernel) = kernel_of(&gp, opts.tietze_budget)?;
    timings.insert("kernel".to_string(), clock.elapsed().as_millis());
    let clock = Instant::now();
    let (_, affine_kernel) = kernel_of(&gpa, opts.tietze_budget)?;
    timings.insert("affine kernel".to_string(), clock.elapsed().as_millis());

    let clock = Instant::now();
    let sq = add_square_relators(&gp.presentation);
    let expected = factorial(d.n);
    let verdict = if kernel.index != expected {
        Verdict::Inconclusive { reason: format!("image has order {}, not {expected}", kernel.index) }
    } else {
        coset::certify_given(&sq, d.n, &kernel.invariants, opts.limits)
    };
    timings.insert("certify".to_string(), clock.elapsed().as_millis());

    let mut notes = Vec::new();
    if !matches_shipped_case(d) {
        notes.push("schema extrapolation: this degeneration is not one of the shipped cases; vertex roles are applied as given".into());
    }
    if let Verdict::KernelNontrivial { .. } = verdict {
        if kernel.invariants.rank == 0 {
            notes.push("kernel certified up to index and abelian invariants; the isomorphism type is not independently certified".into());
        }
    }
    if !kernel.agree || !affine_kernel.agree {
        notes.push("raw and simplified kernel invariants disagree".into());
    }

    Ok(AnalysisReport {
        case: d.name.clone(),
        planes: d.n,
        lines: d.m(),
        generators: gp.presentation.ngens(),
        relators: gp.presentation.relators.len(),
        affine_relators: gpa.presentation.relators.len(),
        image: (1..=d.m())
            .map(|j| format!("g{j} -> {}", degen::edge_transposition(d, j).expect("validated")))
            .collect(),
        image_consistent: true,
        verdict,
        kernel,
        affine_kernel,
        probes: Vec::new(),
        audits: Vec::new(),
        notes,
        timings_ms: timings,
    })
}

/// An element to probe, with its bracket structure when given as `[x, y]`
/// or `<x, y>`.
#[derive(Clone, Debug)]
pub struct ProbeElement {
    pub text: String,
    pub word: Word,
    pub bracket: Option<(TemplateForm, Word, Word)>,
}

impl ProbeElement {
    pub fn parse(text: &str, names: &[String]) -> Result<Self, ParseError> {
        let word = parse_word(text, names)?;
        let t = text.trim();
        let mut bracket = None;
        for (open, close, form) in [('[', ']', TemplateForm::Commutator), ('<', '>', TemplateForm::Triple)] {
            if let Some(inner) = t.strip_prefix(open).and_then(|s| s.strip_suffix(close)) {
                if let Some(split) = top_level_comma(inner) {
                    let x = parse_word(&inner[..split], names)?;
                    let y = parse_word(&inner[split + 1..], names)?;
                    // only when the brackets enclose the whole element
                    let whole = match form {
                        TemplateForm::Commutator => Word::commutator(&x, &y),
                        TemplateForm::Triple => Word::triple(&x, &y),
                    };
                    if whole == word {
                        bracket = Some((form, x, y));
                    }
                }
            }
        }
        Ok(ProbeElement { text: text.trim().to_string(), word, bracket })
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '<' => depth += 1,
            ']' | '>' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CaffClass {
    /// `[x, y]` with `x`, `y` mapping to disjoint transpositions.
    DisjointCommutator,
    /// `<x, y>` with `x`, `y` mapping to transpositions with one common letter.
    OneLetterTriple,
    Unclassified(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    /// Nonzero image in the abelianized kernel.
    Nontrivial,
    /// Zero image; says nothing about triviality.
    InconclusiveZero,
    NotInKernel,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaffProbe {
    pub element: String,
    pub classification: CaffClass,
    pub images: Option<(String, String)>,
    pub verdict: ProbeVerdict,
    pub coordinates: Option<AbelianElement>,
    /// For a left entry of the form `u x u`, the verdict for `u x u^-1`.
    pub conjugation_reading: Option<(String, ProbeVerdict)>,
    pub notes: Vec<String>,
}

impl CaffProbe {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            ProbeVerdict::Nontrivial => 0,
            ProbeVerdict::InconclusiveZero => 2,
            ProbeVerdict::NotInKernel => 1,
        }
    }
}

impl fmt::Display for CaffProbe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "element: {}", self.element)?;
        match &self.classification {
            CaffClass::DisjointCommutator => writeln!(f, "classification: disjoint-transposition commutator")?,
            CaffClass::OneLetterTriple => writeln!(f, "classification: one-common-letter triple relation")?,
            CaffClass::Unclassified(why) => writeln!(f, "classification: none ({why})")?,
        }
        if let Some((a, b)) = &self.images {
            writeln!(f, "images: {a}, {b}")?;
        }
        writeln!(f, "verdict: {:?}", self.verdict)?;
        if let Some(c) = &self.coordinates {
            writeln!(f, "abelianized kernel image: {c}")?;
        }
        if let Some((w, v)) = &self.conjugation_reading {
            writeln!(f, "conjugation reading {w}: {v:?}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn probe_verdict(w: &Word, kd: &KernelData) -> (ProbeVerdict, Option<AbelianElement>) {
    match kernel::element_image(w, kd) {
        Err(_) => (ProbeVerdict::NotInKernel, None),
        Ok(v) if v.is_zero() => (ProbeVerdict::InconclusiveZero, Some(v)),
        Ok(v) => (ProbeVerdict::Nontrivial, Some(v)),
    }
}

/// Classify and evaluate elements in the kernel of the affine squares quotient.
pub fn caff_probe(d: &PlanarDegeneration, elements: &[ProbeElement]) -> Result<Vec<CaffProbe>, PipelineError> {
    let gpa = vankampen::generate(d, false)?;
    check_image(&gpa)?;
    let (kd, _) = kernel_of(&gpa, 0)?;
    let h = gpa.image.hom();
    let names = &gpa.presentation.names;
    let mut out = Vec::new();
    for e in elements {
        let (classification, images) = match &e.bracket {
            None => (CaffClass::Unclassified("not a commutator or triple bracket".into()), None),
            Some((form, x, y)) => {
                let (px, py) = (h.eval(x), h.eval(y));
                let images = Some((px.to_string(), py.to_string()));
                let class = if !px.is_transposition() || !py.is_transposition() {
                    CaffClass::Unclassified("bracket entries do not map to transpositions".into())
                } else {
                    let common = px.support().intersection(&py.support()).count();
                    match (form, common) {
                        (TemplateForm::Commutator, 0) => CaffClass::DisjointCommutator,
                        (TemplateForm::Triple, 1) => CaffClass::OneLetterTriple,
                        _ => CaffClass::Unclassified(format!("{common} common letters")),
                    }
                };
                (class, images)
            }
        };
        let (verdict, coordinates) = probe_verdict(&e.word, &kd);
        let mut notes = Vec::new();
        let mut conjugation_reading = None;
        if let Some((form, x, y)) = &e.bracket {
            let ls = x.letters();
            if ls.len() >= 3 && ls[0] == ls[ls.len() - 1] {
                let mut alt = ls.to_vec();
                let last = alt.len() - 1;
                alt[last] = alt[last].inv();
                let alt_x = Word::new(alt);
                let alt_w = match form {
                    TemplateForm::Commutator => Word::commutator(&alt_x, y),
                    TemplateForm::Triple => Word::triple(&alt_x, y),
                };
                let (v, _) = probe_verdict(&alt_w, &kd);
                notes.push(format!(
                    "left entry has the form u x u; evaluated both as written and as the conjugate u x u^-1 ({})",
                    alt_x.display(names)
                ));
                conjugation_reading = Some((alt_w.display(names).to_string(), v));
            }
        }
        out.push(CaffProbe {
            element: e.text.clone(),
            classification,
            images,
            verdict,
            coordinates,
            conjugation_reading,
            notes,
        });
    }
    Ok(out)
}

/// Expected results for one case.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Expectations {
    #[serde(default)]
    pub verdict: Option<String>,
    #[serde(default)]
    pub cosets: Option<usize>,
    #[serde(default)]
    pub index: Option<usize>,
    #[serde(default)]
    pub kernel: Option<AbelianInvariants>,
    #[serde(default)]
    pub affine_kernel: Option<AbelianInvariants>,
    #[serde(default)]
    pub torsion_2_power: Option<bool>,
    #[serde(default)]
    pub max_rank: Option<usize>,
    /// Projective relators, compared up to order, rotation and inversion.
    #[serde(default)]
    pub relators: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationRef {
    /// Relative to the fixture file.
    pub file: String,
    #[serde(default)]
    pub strands: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeExpectation {
    pub element: String,
    /// `nontrivial`, `inconclusive` or `not-in-kernel`.
    pub verdict: String,
}

impl ProbeVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeVerdict::Nontrivial => "nontrivial",
            ProbeVerdict::InconclusiveZero => "inconclusive",
            ProbeVerdict::NotInKernel => "not-in-kernel",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseFixture {
    /// Path of the degeneration file, relative to the fixture file.
    pub case: String,
    #[serde(default)]
    pub expect: Expectations,
    /// Source of each expected field.
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
    #[serde(default)]
    pub factorizations: Vec<FactorizationRef>,
    #[serde(default)]
    pub probes: Vec<ProbeExpectation>,
    #[serde(skip)]
    pub base: PathBuf,
}

impl CaseFixture {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let fail = |msg: String| PipelineError::Fixture { path: path.display().to_string(), msg };
        let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
        let mut f: CaseFixture = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
        f.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(f)
    }

    pub fn case_path(&self) -> PathBuf {
        self.base.join(&self.case)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub checks: Vec<Check>,
    pub inconclusive: bool,
    pub error: Option<String>,
    pub report: Option<AnalysisReport>,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CorpusSummary {
    pub results: Vec<FixtureResult>,
}

impl CorpusSummary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(FixtureResult::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if !self.passed() {
            1
        } else if self.results.iter().any(|r| r.inconclusive) {
            2
        } else {
            0
        }
    }
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.name)?;
            if let Some(e) = &r.error {
                writeln!(f, "    error: {e}")?;
            }
            for c in &r.checks {
                writeln!(f, "    [{}] {}: {}", if c.passed { "ok" } else { "x" }, c.name, c.detail)?;
            }
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        writeln!(f, "{passed}/{} fixtures passed", self.results.len())
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

/// Compare one fixture's expectations with a fresh analysis.
pub fn run_fixture(fx: &CaseFixture, opts: &Options) -> FixtureResult {
    let mut res = FixtureResult { name: fx.case.clone(), checks: Vec::new(), inconclusive: false, error: None, report: None };
    let d = match PlanarDegeneration::load(fx.case_path()) {
        Ok(d) => d,
        Err(e) => {
            res.error = Some(e.to_string());
            return res;
        }
    };
    res.name = d.name.clone();
    let mut r = match analyze(&d, opts) {
        Ok(r) => r,
        Err(e) => {
            res.error = Some(e.to_string());
            return res;
        }
    };
    res.inconclusive = matches!(r.verdict, Verdict::Inconclusive { .. });
    let e = &fx.expect;
    res.checks.push(check("consistency", r.is_consistent(), "image, verdict and invariants agree".into()));
    if let Some(v) = &e.verdict {
        let got = match r.verdict {
            Verdict::IsoSymmetric { .. } => "iso-symmetric",
            Verdict::KernelNontrivial { .. } => "kernel-nontrivial",
            Verdict::Inconclusive { .. } => "inconclusive",
        };
        res.checks.push(check("verdict", got == v, format!("expected {v}, got {got}")));
    }
    if let Some(c) = e.cosets {
        let got = match r.verdict {
            Verdict::IsoSymmetric { cosets } => Some(cosets),
            Verdict::KernelNontrivial { order, .. } => order,
            _ => None,
        };
        let shown = got.map_or("no count".to_string(), |g| g.to_string());
        res.checks.push(check("cosets", got == Some(c), format!("expected {c}, got {shown}")));
    }
    if let Some(i) = e.index {
        res.checks.push(check("index", r.kernel.index == i, format!("expected {i}, got {}", r.kernel.index)));
    }
    if let Some(k) = &e.kernel {
        res.checks.push(check("kernel", r.kernel.invariants == *k, format!("expected {k}, got {}", r.kernel.invariants)));
    }
    if let Some(k) = &e.affine_kernel {
        res.checks.push(check(
            "affine kernel",
            r.affine_kernel.invariants == *k,
            format!("expected {k}, got {}", r.affine_kernel.invariants),
        ));
    }
    if let Some(t) = e.torsion_2_power {
        res.checks.push(check(
            "2-power torsion",
            r.kernel.torsion_2_power == t,
            format!("expected {t}, got {}", r.kernel.torsion_2_power),
        ));
    }
    if let Some(m) = e.max_rank {
        res.checks.push(check("free rank bound", r.kernel.invariants.rank <= m, format!("rank {} <= {m}", r.kernel.invariants.rank)));
    }
    if let Some(want) = &e.relators {
        res.checks.push(relator_check(&d, want));
    }
    for fr in &fx.factorizations {
        match run_audit(&fx.base.join(&fr.file), fr.strands) {
            Ok(a) => {
                res.checks.push(check(
                    &format!("braid audit {}", fr.file),
                    a.passed,
                    format!("exponent sum {}, permutation {}", a.exponent_sum, a.permutation),
                ));
                r.audits.push(a);
            }
            Err(err) => res.error = Some(err.to_string()),
        }
    }
    if !fx.probes.is_empty() {
        let names = vankampen::generator_names(d.m());
        let parsed: Result<Vec<_>, _> = fx.probes.iter().map(|p| ProbeElement::parse(&p.element, &names)).collect();
        match parsed.map_err(PipelineError::from).and_then(|els| caff_probe(&d, &els)) {
            Ok(probes) => {
                for (p, want) in probes.iter().zip(&fx.probes) {
                    let got = p.verdict.name();
                    res.checks.push(check(
                        &format!("probe {}", want.element),
                        got == want.verdict,
                        format!("expected {}, got {got}", want.verdict),
                    ));
                }
                r.probes = probes;
            }
            Err(err) => res.error = Some(err.to_string()),
        }
    }
    res.report = Some(r);
    res
}

fn relator_check(d: &PlanarDegeneration, want: &[String]) -> Check {
    let gp = match vankampen::generate(d, true) {
        Ok(gp) => gp,
        Err(e) => return check("relators", false, e.to_string()),
    };
    let names = &gp.presentation.names;
    let mut expected = Vec::new();
    for w in want {
        match parse_word(w, names) {
            Ok(w) => expected.push(w.cyclically_reduced().canonical_cyclic()),
            Err(e) => return check("relators", false, e.to_string()),
        }
    }
    let mut got: Vec<_> = gp.presentation.relators.iter().map(Word::canonical_cyclic).collect();
    expected.sort();
    got.sort();
    let missing = expected.iter().filter(|w| !got.contains(w)).count();
    let extra = got.iter().filter(|w| !expected.contains(w)).count();
    check(
        "relators",
        expected == got,
        format!("{} expected, {} generated, {missing} missing, {extra} unexpected", expected.len(), got.len()),
    )
}

/// Parse and audit a factorization file.
pub fn run_audit(path: &Path, strands: Option<usize>) -> Result<AuditReport, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Fixture { path: path.display().to_string(), msg: e.to_string() })?;
    let mut fz = Factorization::parse(&text)?;
    if let Some(p) = strands {
        fz = fz.with_strands(p)?;
    }
    Ok(braid::audit(&fz)?)
}

/// Fixtures run on separate threads; results keep the input order.
pub fn run_corpus(fixtures: &[CaseFixture], opts: &Options) -> CorpusSummary {
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = fixtures.iter().map(|f| s.spawn(move || run_fixture(f, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("fixture thread panicked")).collect()
    });
    CorpusSummary { results }
}

/// Load every `*.fixture.json` in `dir`, sorted by file name.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<CaseFixture>, PipelineError> {
    let dir = dir.as_ref();
    let fail = |msg: String| PipelineError::Fixture { path: dir.display().to_string(), msg };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| fail(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".fixture.json"))
        .collect();
    paths.sort();
    paths.iter().map(CaseFixture::load).collect()
}

/// Degeneration files compiled into the library.
pub fn shipped_cases() -> Vec<PlanarDegeneration> {
    crate::fixtures::CASES
        .iter()
        .map(|(_, text)| PlanarDegeneration::from_json(text).expect("shipped case parses"))
        .collect()
}

pub fn shipped_case(name: &str) -> Option<PlanarDegeneration> {
    crate::fixtures::CASES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| PlanarDegeneration::from_json(text).expect("shipped case parses"))
}

fn matches_shipped_case(d: &PlanarDegeneration) -> bool {
    shipped_cases().iter().any(|s| s.n == d.n && s.edges == d.edges && s.vertices == d.vertices)
}
