//! Evaluation of ontology expressions into a development graph, and link
//! checking.
//!
//! [`analyze`] extracts every inline block, flattens every definition into
//! a [`DevGraph`] node and checks every link. Interpretations between
//! ontologies in the taxonomic fragment get a semantic verdict by truth
//! tables; everything else is checked structurally.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::Serialize;

use crate::adapters::manchester::{ClassExpr, ManchesterAxiom};
use crate::adapters::turtle::{RdfTerm, RdfTriple};
use crate::adapters::{AdapterRegistry, ExtractError};
use crate::diagnostics::{Diagnostic, LineIndex, Severity, SourceSpan};
use crate::iri::Iri;
use crate::known;
use crate::model::{
    BasicOntologyBlock, DistributedOntology, Entity, Item, KindClash, Link, LinkKind, LinkPayload, LogicDeclaration,
    OntologyExpression, Sentence, SentenceForm, SignatureAndSentences, SymbolMap, SymbolRename,
};
use crate::parser::SourceMap;
use crate::registry::{InferenceError, MappingKind, RegistryGraph};
use crate::translate::{self, formula_to_axiom, TranslationImpl};

/// Largest number of class names the truth-table check enumerates.
pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, Default)]
pub struct AnalyzerOptions {
    /// Directories searched for ontologies referenced by IRI but not
    /// defined in the document. Remote IRIs are never fetched.
    pub include_path: Vec<PathBuf>,
    /// Accept projections that drop sentences (reported as warnings).
    pub lossy: bool,
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    /// Definition or external ontology this node stands for.
    pub iri: Option<Iri>,
    pub label: String,
    pub logic: Iri,
    pub content: SignatureAndSentences,
    /// Content could not be read (no adapter); signature and sentences are
    /// empty.
    pub opaque: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeKind {
    Import,
    Extension,
    UnionInclusion,
    Translation(Iri),
    Projection(Iri),
    Interpretation(SymbolMap),
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Import => "import",
            EdgeKind::Extension => "extension",
            EdgeKind::UnionInclusion => "union-inclusion",
            EdgeKind::Translation(_) => "translation",
            EdgeKind::Projection(_) => "projection",
            EdgeKind::Interpretation(_) => "interpretation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DevGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl DevGraph {
    fn add_node(&mut self, iri: Option<Iri>, label: impl Into<String>, content: SignatureAndSentences, opaque: bool) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node { id, iri, label: label.into(), logic: content.logic.clone(), content, opaque });
        id
    }

    fn add_edge(&mut self, kind: EdgeKind, from: NodeId, to: NodeId) {
        self.edges.push(Edge { kind, from, to });
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    /// A cycle along import and extension edges, as a node sequence that
    /// starts and ends with the same node.
    pub fn find_cycle(&self) -> Option<Vec<NodeId>> {
        let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for e in &self.edges {
            if matches!(e.kind, EdgeKind::Import | EdgeKind::Extension) {
                succ.entry(e.from).or_default().push(e.to);
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack: Vec<(NodeId, usize)> = vec![(start, 0)];
            state[start] = 1;
            while let Some((n, i)) = stack.pop() {
                let next = succ.get(&n).and_then(|s| s.get(i)).copied();
                match next {
                    None => state[n] = 2,
                    Some(m) => {
                        stack.push((n, i + 1));
                        match state[m] {
                            0 => {
                                state[m] = 1;
                                stack.push((m, 0));
                            }
                            1 => {
                                let pos = stack.iter().position(|(k, _)| *k == m).unwrap();
                                let mut cycle: Vec<NodeId> = stack[pos..].iter().map(|(k, _)| *k).collect();
                                cycle.push(m);
                                return Some(cycle);
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Refuted,
    StructurallyOk,
    RefutedStructurally,
    Unsupported,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::StructurallyOk => "structurally-ok",
            Verdict::RefutedStructurally => "refuted-structurally",
            Verdict::Unsupported => "unsupported",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub link: Iri,
    pub kind: LinkKind,
    pub verdict: Verdict,
    pub evidence: String,
    /// Class name to truth value; present on every `refuted` verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter_assignment: Option<BTreeMap<String, bool>>,
    /// The translated source axiom the counter-assignment falsifies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated: Option<String>,
}

impl CheckReport {
    fn new(link: &Link, verdict: Verdict, evidence: impl Into<String>) -> Self {
        CheckReport {
            link: link.iri.clone(),
            kind: link.kind,
            verdict,
            evidence: evidence.into(),
            counter_assignment: None,
            violated: None,
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} <{}>: {}\n  {}\n", self.kind.as_str(), self.link, self.verdict.as_str(), self.evidence);
        if let Some(v) = &self.violated {
            out.push_str(&format!("  violated: {v}\n"));
        }
        if let Some(a) = &self.counter_assignment {
            let parts: Vec<String> = a.iter().map(|(k, v)| format!("{}={v}", Iri::parse(k.as_str()).map_or(k.clone(), |i| i.local_name().to_owned()))).collect();
            out.push_str(&format!("  counter-assignment: {}\n", parts.join(", ")));
        }
        out
    }
}

/// Everything [`analyze`] produces.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// The input with every extractable block's structure filled in.
    pub document: DistributedOntology,
    pub graph: DevGraph,
    pub definitions: IndexMap<Iri, NodeId>,
    /// Reports sorted by link IRI.
    pub reports: Vec<CheckReport>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    severity: Severity,
    code: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    column: Option<usize>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    file: &'a str,
    document: Option<&'a Iri>,
    errors: usize,
    warnings: usize,
    diagnostics: Vec<JsonDiagnostic<'a>>,
    reports: &'a [CheckReport],
}

impl Analysis {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    pub fn definition_node(&self, iri: &Iri) -> Option<&Node> {
        self.definitions.get(iri).map(|&id| self.graph.node(id))
    }

    pub fn report(&self, link: &Iri) -> Option<&CheckReport> {
        self.reports.iter().find(|r| &r.link == link)
    }

    /// Machine-readable report; `extra` diagnostics (e.g. from parsing) are
    /// listed first.
    pub fn json_report(&self, file: &str, extra: &[Diagnostic]) -> String {
        let all: Vec<&Diagnostic> = extra.iter().chain(&self.diagnostics).collect();
        let report = JsonReport {
            file,
            document: self.document.iri.as_ref(),
            errors: all.iter().filter(|d| d.severity == Severity::Error).count(),
            warnings: all.iter().filter(|d| d.severity == Severity::Warning).count(),
            diagnostics: all
                .iter()
                .map(|d| JsonDiagnostic {
                    severity: d.severity,
                    code: d.code,
                    message: &d.message,
                    line: d.span.as_ref().map(|s| s.line),
                    column: d.span.as_ref().map(|s| s.column),
                })
                .collect(),
            reports: &self.reports,
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }
}

/// Extracts, flattens and checks a parsed document.
pub fn analyze(
    doc: &DistributedOntology,
    source_map: Option<&SourceMap>,
    registry: &RegistryGraph,
    adapters: &AdapterRegistry,
    options: &AnalyzerOptions,
) -> Analysis {
    let mut a = Analyzer::new(doc, source_map, registry, adapters, options);
    a.diagnostics.extend(lint_conformance(doc, registry, source_map));
    for (idx, item) in doc.items.iter().enumerate() {
        if let Item::Definition(d) = item {
            a.current_item = Some(idx);
            if let Some(n) = a.reference(&d.iri, &a.contexts[idx].clone(), false) {
                a.definitions.insert(d.iri.clone(), n);
            }
        }
    }
    let mut reports = Vec::new();
    for (idx, item) in doc.items.iter().enumerate() {
        if let Item::Link(link) = item {
            a.current_item = Some(idx);
            let ctx = a.contexts[idx].clone();
            let s = a.flatten(&link.source, &ctx);
            let t = a.flatten(&link.target, &ctx);
            let (Some(s), Some(t)) = (s, t) else {
                reports.push(CheckReport::new(link, Verdict::Unsupported, "source or target could not be evaluated"));
                continue;
            };
            if let LinkPayload::SymbolMap(m) = &link.payload {
                a.graph.add_edge(EdgeKind::Interpretation(m.clone()), s, t);
            }
            let (source, target) = (&a.graph.node(s).content, &a.graph.node(t).content);
            let (report, diags) = match link.kind {
                LinkKind::Interpretation => check_interpretation(link, source, target, registry),
                LinkKind::Alignment => check_alignment(link, source, target),
                other => (CheckReport::new(link, Verdict::Unsupported, format!("no checker for {} links", other.as_str())), Vec::new()),
            };
            let span = a.item_span();
            a.diagnostics.extend(diags.into_iter().map(|mut d| {
                d.span = d.span.or_else(|| span.clone());
                d
            }));
            reports.push(report);
        }
    }
    reports.sort_by(|x, y| x.link.cmp(&y.link));
    a.finish(reports)
}

/// Evaluates expressions of one document into a [`DevGraph`].
pub struct Analyzer<'a> {
    doc: &'a DistributedOntology,
    source_map: Option<&'a SourceMap>,
    registry: &'a RegistryGraph,
    adapters: &'a AdapterRegistry,
    options: &'a AnalyzerOptions,
    pub graph: DevGraph,
    pub diagnostics: Vec<Diagnostic>,
    pub definitions: IndexMap<Iri, NodeId>,
    /// Declaration in effect at each item.
    contexts: Vec<LogicDeclaration>,
    /// Block address to (item, ordinal).
    origins: HashMap<usize, (usize, usize)>,
    extracted: HashMap<usize, SignatureAndSentences>,
    resolved: HashMap<Iri, Option<NodeId>>,
    stack: Vec<Iri>,
    current_item: Option<usize>,
}

fn item_exprs(item: &Item) -> Vec<&OntologyExpression> {
    match item {
        Item::Definition(d) => vec![&d.body],
        Item::Link(l) => vec![&l.source, &l.target],
        Item::Logic(_) => Vec::new(),
    }
}

fn block_key(b: &BasicOntologyBlock) -> usize {
    b as *const BasicOntologyBlock as usize
}

impl<'a> Analyzer<'a> {
    pub fn new(
        doc: &'a DistributedOntology,
        source_map: Option<&'a SourceMap>,
        registry: &'a RegistryGraph,
        adapters: &'a AdapterRegistry,
        options: &'a AnalyzerOptions,
    ) -> Self {
        let mut contexts = Vec::with_capacity(doc.items.len());
        let mut origins = HashMap::new();
        let mut ctx = LogicDeclaration::default();
        for (idx, item) in doc.items.iter().enumerate() {
            if let Item::Logic(d) = item {
                ctx = d.clone();
            }
            contexts.push(ctx.clone());
            let blocks = item_exprs(item).into_iter().flat_map(|e| e.blocks());
            for (ordinal, b) in blocks.enumerate() {
                origins.insert(block_key(b), (idx, ordinal));
            }
        }
        Analyzer {
            doc,
            source_map,
            registry,
            adapters,
            options,
            graph: DevGraph::default(),
            diagnostics: Vec::new(),
            definitions: IndexMap::new(),
            contexts,
            origins,
            extracted: HashMap::new(),
            resolved: HashMap::new(),
            stack: Vec::new(),
            current_item: None,
        }
    }

    fn item_span(&self) -> Option<SourceSpan> {
        let map = self.source_map?;
        Some(map.span(map.items.get(self.current_item?)?.clone()))
    }

    fn diag(&mut self, severity: Severity, code: &'static str, message: impl Into<String>) {
        let span = self.item_span();
        self.diagnostics.push(Diagnostic::new(severity, code, message, span));
    }

    fn error(&mut self, code: &'static str, message: impl Into<String>) {
        self.diag(Severity::Error, code, message);
    }

    fn show(&self, iri: &Iri) -> String {
        match crate::iri::compact(iri, &self.doc.prefixes) {
            crate::iri::Compacted::Curie(c) => c.to_string(),
            _ => format!("<{iri}>"),
        }
    }

    /// Evaluates `e` under the declaration `ctx`.
    pub fn flatten(&mut self, e: &'a OntologyExpression, ctx: &LogicDeclaration) -> Option<NodeId> {
        match e {
            OntologyExpression::Reference(iri) => self.reference(iri, ctx, false),
            OntologyExpression::Inline(b) => self.inline(b),
            OntologyExpression::ContextShift { decl, inner } => self.flatten(inner, &decl.shifted_from(ctx)),
            OntologyExpression::Extension(base, ext) => {
                let nb = self.flatten(base, ctx);
                let ne = self.flatten(ext, ctx);
                let (nb, ne) = (nb?, ne?);
                let logic = self.graph.node(ne).logic.clone();
                let nb = self.coerce(nb, &logic)?;
                self.combine(nb, ne, EdgeKind::Extension, "extension")
            }
            OntologyExpression::Union(l, r) => {
                let nl = self.flatten(l, ctx);
                let nr = self.flatten(r, ctx);
                let (mut nl, mut nr) = (nl?, nr?);
                let (ll, lr) = (self.graph.node(nl).logic.clone(), self.graph.node(nr).logic.clone());
                if ll != lr {
                    if self.registry.default_translation(&ll, &lr).is_ok() {
                        nl = self.coerce(nl, &lr)?;
                    } else if self.registry.default_translation(&lr, &ll).is_ok() {
                        nr = self.coerce(nr, &ll)?;
                    } else {
                        self.error(
                            "E202",
                            format!("cannot unite ontologies in <{ll}> and <{lr}>: no default translation in either direction"),
                        );
                        return None;
                    }
                }
                self.combine(nl, nr, EdgeKind::UnionInclusion, "union")
            }
            OntologyExpression::Translation { base, mapping, renames } => {
                let n = self.flatten(base, ctx)?;
                let mut content = self.graph.node(n).content.clone();
                if let Some(m) = mapping {
                    let t = self.mapping(m, MappingKind::Translation)?;
                    content = match translate::apply_translation(&t, &content) {
                        Ok(c) => c,
                        Err(err) => {
                            self.error("E210", format!("translation with {} failed: {err}", self.show(m)));
                            return None;
                        }
                    };
                }
                for r in renames {
                    if content.entity(&r.from).is_none() {
                        self.error("E209", format!("rename source {} is not in the signature being translated", self.show(&r.from)));
                        return None;
                    }
                }
                let content = match apply_renames(&content, renames) {
                    Ok(c) => c,
                    Err(clash) => return self.clash(&clash),
                };
                let id = self.graph.add_node(None, "translation", content, false);
                let kind = EdgeKind::Translation(mapping.clone().unwrap_or_else(|| known::iri(known::TRANSLATIONS)));
                self.graph.add_edge(kind, n, id);
                Some(id)
            }
            OntologyExpression::Projection { base, mapping } => {
                let n = self.flatten(base, ctx)?;
                let t = self.mapping(mapping, MappingKind::Projection)?;
                let applied = match translate::apply(&t, &self.graph.node(n).content) {
                    Ok(a) => a,
                    Err(err) => {
                        self.error("E210", format!("projection with {} failed: {err}", self.show(mapping)));
                        return None;
                    }
                };
                let name = self.show(mapping);
                for d in &applied.dropped {
                    if self.options.lossy {
                        self.diag(Severity::Warning, "W105", format!("projection {name} drops {}: {}", d.construct, d.sentence));
                    } else {
                        self.error("E207", format!("projection {name} cannot express {}: {} (pass --lossy to drop it)", d.construct, d.sentence));
                    }
                }
                let id = self.graph.add_node(None, "projection", applied.result, false);
                self.graph.add_edge(EdgeKind::Projection(mapping.clone()), n, id);
                Some(id)
            }
        }
    }

    fn clash(&mut self, c: &KindClash) -> Option<NodeId> {
        self.error("E203", format!("{} is used both as {} and as {}", self.show(&c.iri), c.first, c.second));
        None
    }

    fn combine(&mut self, a: NodeId, b: NodeId, kind: EdgeKind, label: &str) -> Option<NodeId> {
        let mut content = self.graph.node(a).content.clone();
        if let Err(c) = content.merge(&self.graph.node(b).content) {
            return self.clash(&c);
        }
        let opaque = self.graph.node(a).opaque || self.graph.node(b).opaque;
        let id = self.graph.add_node(None, label, content, opaque);
        self.graph.add_edge(kind.clone(), a, id);
        self.graph.add_edge(kind, b, id);
        Some(id)
    }

    /// The implementation of a mapping named in the document.
    fn mapping(&mut self, m: &Iri, expected: MappingKind) -> Option<TranslationImpl> {
        let Some(desc) = self.registry.mappings.get(m) else {
            self.error("E208", format!("{} is not a registered mapping", self.show(m)));
            return None;
        };
        if desc.kind != expected {
            let (is, use_) = match desc.kind {
                MappingKind::Projection => ("a projection", "project with"),
                MappingKind::Translation => ("a translation", "translate with"),
            };
            self.error("E208", format!("{} is {is}; use `{use_}`", self.show(m)));
            return None;
        }
        match TranslationImpl::from_registry(m, self.registry) {
            Ok(t) => Some(t),
            Err(e) => {
                self.error("E208", e.to_string());
                None
            }
        }
    }

    /// Moves a node into `logic` along the default translation.
    fn coerce(&mut self, n: NodeId, logic: &Iri) -> Option<NodeId> {
        let from = self.graph.node(n).logic.clone();
        if &from == logic {
            return Some(n);
        }
        let path: Vec<Iri> = match self.registry.default_translation(&from, logic) {
            Ok(p) => p.into_iter().map(|m| m.iri.clone()).collect(),
            Err(e) => {
                self.error("E202", e.to_string());
                return None;
            }
        };
        let names: Vec<String> = path.iter().map(|m| self.show(m)).collect();
        self.diag(
            Severity::Info,
            "I101",
            format!("default translation {} from <{from}> to <{logic}> chosen implicitly", names.join(" ; ")),
        );
        let mut cur = n;
        for m in path {
            let t = match TranslationImpl::from_registry(&m, self.registry) {
                Ok(t) => t,
                Err(e) => {
                    self.error("E208", e.to_string());
                    return None;
                }
            };
            let content = match translate::apply_translation(&t, &self.graph.node(cur).content) {
                Ok(c) => c,
                Err(e) => {
                    self.error("E210", format!("default translation {} failed: {e}", self.show(&m)));
                    return None;
                }
            };
            let opaque = self.graph.node(cur).opaque;
            let id = self.graph.add_node(None, "translation", content, opaque);
            self.graph.add_edge(EdgeKind::Translation(m), cur, id);
            cur = id;
        }
        Some(cur)
    }

    /// Resolves an ontology name: a definition of this document, else a
    /// file on the include path. With `soft`, a missing file is left to the
    /// caller to report.
    fn reference(&mut self, iri: &Iri, ctx: &LogicDeclaration, soft: bool) -> Option<NodeId> {
        if let Some(r) = self.resolved.get(iri) {
            return *r;
        }
        if let Some(pos) = self.stack.iter().position(|i| i == iri) {
            let mut trace: Vec<String> = self.stack[pos..].iter().map(|i| self.show(i)).collect();
            trace.push(self.show(iri));
            self.error("E206", format!("cyclic reference: {}", trace.join(" -> ")));
            return None;
        }
        let def = self.doc.items.iter().enumerate().find_map(|(idx, item)| match item {
            Item::Definition(d) if &d.iri == iri => Some((idx, d)),
            _ => None,
        });
        let result = if let Some((idx, def)) = def {
            self.stack.push(iri.clone());
            let saved = self.current_item.replace(idx);
            let ctx = self.contexts[idx].clone();
            let body = self.flatten(&def.body, &ctx);
            self.current_item = saved;
            self.stack.pop();
            body.map(|n| self.name_node(n, iri, iri.to_string()))
        } else {
            match self.find_file(iri) {
                Some(path) => {
                    self.stack.push(iri.clone());
                    let r = self.external(iri, &path, ctx);
                    self.stack.pop();
                    r
                }
                None if soft => return None,
                None => {
                    self.error(
                        "E201",
                        format!(
                            "{} is not defined in this document and no file `{}` is on the include path",
                            self.show(iri),
                            iri.local_name()
                        ),
                    );
                    None
                }
            }
        };
        self.resolved.insert(iri.clone(), result);
        result
    }

    /// Gives a node a name; an already named node gets a named alias.
    fn name_node(&mut self, n: NodeId, iri: &Iri, label: String) -> NodeId {
        if self.graph.nodes[n].iri.is_none() {
            self.graph.nodes[n].iri = Some(iri.clone());
            self.graph.nodes[n].label = label;
            n
        } else {
            let (content, opaque) = (self.graph.node(n).content.clone(), self.graph.node(n).opaque);
            let id = self.graph.add_node(Some(iri.clone()), label, content, opaque);
            self.graph.add_edge(EdgeKind::Import, n, id);
            id
        }
    }

    fn find_file(&self, iri: &Iri) -> Option<PathBuf> {
        let name = iri.local_name();
        if name.is_empty() || name == "." || name == ".." || name.contains(['\\', '/']) {
            return None;
        }
        let exts = self.registry.extensions();
        for root in &self.options.include_path {
            let plain = root.join(name);
            if plain.is_file() {
                return Some(plain);
            }
            for ext in &exts {
                let p = root.join(format!("{name}.{ext}"));
                if p.is_file() {
                    return Some(p);
                }
            }
        }
        None
    }

    fn external(&mut self, iri: &Iri, path: &Path, ctx: &LogicDeclaration) -> Option<NodeId> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                self.error("E201", format!("cannot read {}: {e}", path.display()));
                return None;
            }
        };
        let by_ext = path
            .extension()
            .and_then(|e| e.to_str())
            .and_then(|e| self.registry.serialization_for_extension(e))
            .map(|s| s.iri.clone());
        let triple = match (&ctx.serialization, by_ext) {
            (Some(_), _) => self.registry.infer_triple(ctx.language.as_ref(), ctx.logic.as_ref(), ctx.serialization.as_ref()),
            (None, Some(ser)) => match self.registry.infer_triple(None, None, Some(&ser)) {
                Err(InferenceError::Ambiguous { .. }) => {
                    self.registry.infer_triple(ctx.language.as_ref(), ctx.logic.as_ref(), Some(&ser))
                }
                r => r,
            },
            (None, None) => {
                self.error("E205", format!("cannot tell the serialization of {}", path.display()));
                return None;
            }
        };
        let triple = match triple {
            Ok(t) => t,
            Err(e) => {
                self.error("E205", format!("{}: {e}", path.display()));
                return None;
            }
        };
        let label = path.display().to_string();
        if self.adapters.get(&triple.logic, &triple.serialization).is_none() {
            self.diag(
                Severity::Warning,
                "W104",
                format!(
                    "no adapter reads <{}> files; {} is kept as an opaque node",
                    triple.serialization,
                    path.file_name().map_or_else(|| label.clone(), |f| f.to_string_lossy().into_owned())
                ),
            );
            return Some(self.graph.add_node(Some(iri.clone()), label, SignatureAndSentences::empty(triple.logic), true));
        }
        let sig = match self.adapters.extract_text(&triple.logic, &triple.serialization, &text, &self.doc.prefixes) {
            Ok(s) => s,
            Err(ExtractError::Syntax(e)) => {
                let (line, col) = LineIndex::new(&text).position(e.span.start);
                self.error("E204", format!("{}:{line}:{col}: {}", path.display(), e.message));
                return None;
            }
            Err(e) => {
                self.error("E204", format!("{}: {e}", path.display()));
                return None;
            }
        };
        let decl = LogicDeclaration {
            language: Some(triple.language),
            logic: Some(triple.logic),
            serialization: Some(triple.serialization),
        };
        let id = self.graph.add_node(Some(iri.clone()), label, sig, false);
        self.resolve_imports(id, &decl)
    }

    fn inline(&mut self, b: &'a BasicOntologyBlock) -> Option<NodeId> {
        let d = &b.decl;
        let triple = match self.registry.infer_triple(d.language.as_ref(), d.logic.as_ref(), d.serialization.as_ref()) {
            Ok(t) => t,
            // Reported by the conformance lint.
            Err(InferenceError::LogicUnknown(_)) => return None,
            Err(e) => {
                self.error("E205", format!("cannot complete the declaration of this block: {e}"));
                return None;
            }
        };
        let key = block_key(b);
        if self.adapters.get(&triple.logic, &triple.serialization).is_none() {
            self.diag(
                Severity::Warning,
                "W104",
                format!("no adapter for <{}> in <{}>; block kept opaque", triple.logic, triple.serialization),
            );
            let empty = SignatureAndSentences::empty(triple.logic);
            self.extracted.insert(key, empty.clone());
            return Some(self.graph.add_node(None, "block", empty, true));
        }
        let sig = match self.adapters.extract_text(&triple.logic, &triple.serialization, &b.text, &self.doc.prefixes) {
            Ok(s) => s,
            Err(ExtractError::Syntax(e)) => {
                let span = self.origins.get(&key).and_then(|&(item, ordinal)| {
                    let map = self.source_map?;
                    let r = map.block(item, ordinal)?;
                    Some(map.span(r.start + e.span.start..r.start + e.span.end))
                });
                let span = span.or_else(|| self.item_span());
                self.diagnostics.push(Diagnostic::new(Severity::Error, "E204", e.message, span));
                return None;
            }
            Err(e) => {
                self.error("E204", e.to_string());
                return None;
            }
        };
        self.extracted.insert(key, sig.clone());
        let decl = LogicDeclaration {
            language: Some(triple.language),
            logic: Some(triple.logic),
            serialization: Some(triple.serialization),
        };
        let id = self.graph.add_node(None, "block", sig, false);
        self.resolve_imports(id, &decl)
    }

    /// Merges the ontologies a node imports into it.
    fn resolve_imports(&mut self, id: NodeId, decl: &LogicDeclaration) -> Option<NodeId> {
        let imports = self.graph.node(id).content.imports.clone();
        for imp in imports {
            let errors_before = self.diagnostics.iter().filter(|d| d.is_error()).count();
            match self.reference(&imp, decl, true) {
                Some(n) => {
                    let (from, to) = (self.graph.node(n).logic.clone(), self.graph.node(id).logic.clone());
                    if from != to {
                        self.error("E202", format!("{} is in <{from}> but is imported into <{to}>", self.show(&imp)));
                        return None;
                    }
                    let other = self.graph.node(n).content.clone();
                    if let Err(c) = self.graph.nodes[id].content.merge(&other) {
                        return self.clash(&c);
                    }
                    self.graph.add_edge(EdgeKind::Import, n, id);
                }
                None => {
                    let failed = self.diagnostics.iter().filter(|d| d.is_error()).count() > errors_before;
                    if failed {
                        return None;
                    }
                    self.diag(
                        Severity::Warning,
                        "W107",
                        format!("imported {} not found on the include path; import ignored", self.show(&imp)),
                    );
                }
            }
        }
        Some(id)
    }

    /// The analysis result; `reports` are the link checks.
    pub fn finish(self, reports: Vec<CheckReport>) -> Analysis {
        let mut document = self.doc.clone();
        for (orig, copy) in self.doc.items.iter().zip(document.items.iter_mut()) {
            let keys: Vec<usize> = item_exprs(orig).into_iter().flat_map(|e| e.blocks()).map(block_key).collect();
            let mut i = 0;
            let mut fill = |e: &mut OntologyExpression| {
                if let OntologyExpression::Inline(b) = e {
                    b.extracted = self.extracted.get(&keys[i]).cloned();
                    i += 1;
                }
            };
            match copy {
                Item::Definition(d) => d.body.walk_mut(&mut fill),
                Item::Link(l) => {
                    l.source.walk_mut(&mut fill);
                    l.target.walk_mut(&mut fill);
                }
                Item::Logic(_) => {}
            }
        }
        Analysis { document, graph: self.graph, definitions: self.definitions, reports, diagnostics: self.diagnostics }
    }
}

/// Applies a symbol renaming to signature and sentences.
pub fn apply_renames(s: &SignatureAndSentences, renames: &[SymbolRename]) -> Result<SignatureAndSentences, KindClash> {
    if renames.is_empty() {
        return Ok(s.clone());
    }
    let table: HashMap<&Iri, &Iri> = renames.iter().map(|r| (&r.from, &r.to)).collect();
    let f = |i: &Iri| table.get(i).map_or_else(|| i.clone(), |t| (*t).clone());
    let mut out = SignatureAndSentences::empty(s.logic.clone());
    for e in s.entities.values() {
        out.add_entity(Entity { iri: f(&e.iri), kind: e.kind, declared: e.declared })?;
    }
    for sen in &s.sentences {
        let form = match &sen.form {
            SentenceForm::Prop(p) => SentenceForm::Prop(p.map_atoms(&f)),
            SentenceForm::Owl(a) => SentenceForm::Owl(a.map_names(&f)),
            SentenceForm::Clif(c) => SentenceForm::Clif(c.map_names(&f)),
            SentenceForm::Rdf(t) => {
                let term = |x: &RdfTerm| match x {
                    RdfTerm::Iri(i) => RdfTerm::Iri(f(i)),
                    other => other.clone(),
                };
                SentenceForm::Rdf(RdfTriple::new(term(&t.subject), f(&t.predicate), term(&t.object)))
            }
        };
        out.sentences.push(Sentence { logic: sen.logic.clone(), form, span: sen.span.clone() });
    }
    out.imports = s.imports.clone();
    Ok(out)
}

/// Truth of a class expression at the single element of a one-element
/// interpretation with all roles empty.
pub fn holds_pointwise(c: &ClassExpr, v: &dyn Fn(&Iri) -> bool) -> bool {
    match c {
        ClassExpr::Thing => true,
        ClassExpr::Nothing => false,
        ClassExpr::Class(i) if i.as_str() == known::OWL_THING => true,
        ClassExpr::Class(i) if i.as_str() == known::OWL_NOTHING => false,
        ClassExpr::Class(i) => v(i),
        ClassExpr::And(xs) => xs.iter().all(|x| holds_pointwise(x, v)),
        ClassExpr::Or(xs) => xs.iter().any(|x| holds_pointwise(x, v)),
        ClassExpr::Not(x) => !holds_pointwise(x, v),
        ClassExpr::Some(..) => false,
        ClassExpr::Only(..) => true,
        ClassExpr::Exactly(n, ..) => *n == 0,
    }
}

/// Truth of an axiom in that interpretation; every individual denotes the
/// single element.
pub fn axiom_holds_pointwise(a: &ManchesterAxiom, v: &dyn Fn(&Iri) -> bool) -> bool {
    let c = |x: &ClassExpr| holds_pointwise(x, v);
    match a {
        ManchesterAxiom::SubClassOf(x, y) => !c(x) || c(y),
        ManchesterAxiom::EquivalentTo(n, y) => v(n) == c(y),
        ManchesterAxiom::DisjointUnionOf(n, xs) => {
            let on = xs.iter().filter(|x| c(x)).count();
            on <= 1 && v(n) == (on == 1)
        }
        ManchesterAxiom::Characteristic(..) | ManchesterAxiom::SubPropertyOf(..) => true,
        ManchesterAxiom::Types(_, y) => c(y),
        ManchesterAxiom::Fact(..) => false,
    }
}

/// Outcome of the truth-table entailment check.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// Every conclusion holds wherever the taxonomic premises do.
    Entailed { atoms: Vec<Iri>, assignments: u64 },
    /// A one-element model of all premises falsifying `violated`.
    Countermodel { assignment: BTreeMap<Iri, bool>, violated: ManchesterAxiom },
    /// The taxonomic premises do not entail everything, but no one-element
    /// model of all premises is a witness.
    Undecided { violated: ManchesterAxiom },
    TooLarge { atoms: usize },
}

fn enumerate(atoms: &[Iri], mut f: impl FnMut(&dyn Fn(&Iri) -> bool) -> bool) -> Option<u64> {
    let index: HashMap<&Iri, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    for mask in 0u64..(1u64 << atoms.len()) {
        let v = |i: &Iri| index.get(i).is_some_and(|&k| mask >> k & 1 == 1);
        if f(&v) {
            return Some(mask);
        }
    }
    None
}

/// Decides whether `premises` entail each of `conclusions`, which must all
/// be taxonomic. Only the taxonomic premises are used to prove entailment;
/// a refutation must be a model of every premise.
pub fn decide_taxonomic(premises: &[ManchesterAxiom], conclusions: &[ManchesterAxiom]) -> Decision {
    let fragment: Vec<&ManchesterAxiom> = premises.iter().filter(|a| a.is_taxonomic()).collect();
    let mut names: BTreeSet<Iri> = BTreeSet::new();
    for a in fragment.iter().copied().chain(conclusions) {
        names.extend(a.class_names());
    }
    let atoms: Vec<Iri> = names.into_iter().collect();
    if atoms.len() > MAX_ATOMS {
        return Decision::TooLarge { atoms: atoms.len() };
    }
    let mut violated = None;
    enumerate(&atoms, |v| {
        if fragment.iter().all(|a| axiom_holds_pointwise(a, v)) {
            violated = conclusions.iter().find(|c| !axiom_holds_pointwise(c, v)).cloned();
        }
        violated.is_some()
    });
    let Some(first) = violated else {
        return Decision::Entailed { assignments: 1u64 << atoms.len(), atoms };
    };
    let mut all: BTreeSet<Iri> = atoms.into_iter().collect();
    for a in premises {
        all.extend(a.class_names());
    }
    let all: Vec<Iri> = all.into_iter().collect();
    if all.len() > MAX_ATOMS {
        return Decision::Undecided { violated: first };
    }
    let mut witness = None;
    let found = enumerate(&all, |v| {
        if premises.iter().all(|a| axiom_holds_pointwise(a, v)) {
            witness = conclusions.iter().find(|c| !axiom_holds_pointwise(c, v)).cloned();
        }
        witness.is_some()
    });
    match (found, witness) {
        (Some(mask), Some(violated)) => Decision::Countermodel {
            assignment: all.iter().enumerate().map(|(k, a)| (a.clone(), mask >> k & 1 == 1)).collect(),
            violated,
        },
        _ => Decision::Undecided { violated: first },
    }
}

/// Sentences as Manchester axioms; propositional sentences are read
/// pointwise. `None` if some sentence is in another logic.
fn as_axioms(s: &SignatureAndSentences) -> Option<Vec<ManchesterAxiom>> {
    s.sentences
        .iter()
        .map(|sen| match &sen.form {
            SentenceForm::Owl(a) => Some(a.clone()),
            SentenceForm::Prop(p) => Some(formula_to_axiom(p)),
            _ => None,
        })
        .collect()
}

fn local(i: &Iri) -> &str {
    i.local_name()
}

/// Checks an interpretation: translate the source, rename, then decide
/// entailment in the target where the fragment allows.
pub fn check_interpretation(
    link: &Link,
    source: &SignatureAndSentences,
    target: &SignatureAndSentences,
    registry: &RegistryGraph,
) -> (CheckReport, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let err = |code: &'static str, m: String| Diagnostic::new(Severity::Error, code, m, None);
    let LinkPayload::SymbolMap(map) = &link.payload else {
        return (CheckReport::new(link, Verdict::Unsupported, "interpretation without a symbol map"), diags);
    };
    let translation = match &map.translation {
        Some(m) => match registry.mappings.get(m) {
            Some(d) if d.kind == MappingKind::Projection => {
                diags.push(err("E208", format!("<{m}> is a projection and cannot carry an interpretation")));
                None
            }
            _ => match TranslationImpl::from_registry(m, registry) {
                Ok(t) => Some(t),
                Err(e) => {
                    diags.push(err("E208", e.to_string()));
                    None
                }
            },
        },
        None if source.logic == target.logic => Some(TranslationImpl::identity()),
        None => match registry.default_translation(&source.logic, &target.logic) {
            Ok(path) => {
                let names: Vec<&str> = path.iter().map(|m| local(&m.iri)).collect();
                diags.push(Diagnostic::new(
                    Severity::Info,
                    "I101",
                    format!("default translation {} chosen implicitly for <{}>", names.join(" ; "), link.iri),
                    None,
                ));
                path.iter()
                    .map(|m| TranslationImpl::from_registry(&m.iri, registry))
                    .collect::<Result<Vec<_>, _>>()
                    .and_then(|ts| translate::compose(&ts))
                    .map_err(|e| diags.push(err("E208", e.to_string())))
                    .ok()
            }
            Err(e) => {
                diags.push(err("E202", e.to_string()));
                None
            }
        },
    };
    let Some(translation) = translation else {
        return (CheckReport::new(link, Verdict::Unsupported, "no usable translation from source to target logic"), diags);
    };
    let translated = match translate::apply_translation(&translation, source) {
        Ok(t) => t,
        Err(e) => {
            diags.push(err("E210", e.to_string()));
            return (CheckReport::new(link, Verdict::Unsupported, format!("source cannot be translated: {e}")), diags);
        }
    };
    if translated.logic != target.logic {
        diags.push(err(
            "E202",
            format!("translated source is in <{}> but the target is in <{}>", translated.logic, target.logic),
        ));
        return (CheckReport::new(link, Verdict::Unsupported, "source and target logics differ after translation"), diags);
    }

    let mut problems = Vec::new();
    if let Some(dup) = map.duplicate_source() {
        diags.push(err("E209", format!("symbol <{dup}> is mapped more than once")));
        problems.push(format!("{} mapped twice", local(dup)));
    }
    for r in &map.renames {
        if translated.entity(&r.from).is_none() {
            diags.push(err("E209", format!("rename source <{}> is not in the source signature", r.from)));
            problems.push(format!("{} absent from source", local(&r.from)));
        }
        if target.entity(&r.to).is_none() {
            diags.push(err("E209", format!("rename target <{}> is not in the target signature", r.to)));
            problems.push(format!("{} absent from target", local(&r.to)));
        }
    }
    if !problems.is_empty() {
        return (CheckReport::new(link, Verdict::RefutedStructurally, problems.join("; ")), diags);
    }
    let renamed = match apply_renames(&translated, &map.renames) {
        Ok(r) => r,
        Err(c) => {
            let msg = format!("renaming identifies <{}> as both {} and {}", c.iri, c.first, c.second);
            diags.push(err("E203", msg.clone()));
            return (CheckReport::new(link, Verdict::RefutedStructurally, msg), diags);
        }
    };
    for e in renamed.entities.values() {
        match target.entity(&e.iri) {
            None => problems.push(format!("{} has no counterpart in the target", local(&e.iri))),
            Some(t) if t.kind != e.kind => {
                problems.push(format!("{} is a {} in the source but a {} in the target", local(&e.iri), e.kind, t.kind))
            }
            _ => {}
        }
    }
    if !problems.is_empty() {
        return (CheckReport::new(link, Verdict::RefutedStructurally, problems.join("; ")), diags);
    }
    let resolved = format!("{0} of {0} source symbols resolve in the target", renamed.entities.len());

    let (Some(conclusions), Some(premises)) = (as_axioms(&renamed), as_axioms(target)) else {
        return (
            CheckReport::new(link, Verdict::StructurallyOk, format!("{resolved}; entailment in <{}> is not decided", target.logic)),
            diags,
        );
    };
    if !conclusions.iter().all(ManchesterAxiom::is_taxonomic) {
        return (
            CheckReport::new(link, Verdict::StructurallyOk, format!("{resolved}; source is outside the taxonomic fragment")),
            diags,
        );
    }
    let report = match decide_taxonomic(&premises, &conclusions) {
        Decision::Entailed { atoms, assignments } => {
            let fragment = premises.iter().filter(|a| a.is_taxonomic()).count();
            CheckReport::new(
                link,
                Verdict::Verified,
                format!(
                    "all {} translated axioms hold in every one of {assignments} assignments to {} class names that satisfy the target's {fragment} taxonomic axioms",
                    conclusions.len(),
                    atoms.len()
                ),
            )
        }
        Decision::Countermodel { assignment, violated } => {
            let mut r = CheckReport::new(
                link,
                Verdict::Refuted,
                "a one-element model of the target, with all roles empty, falsifies a translated axiom",
            );
            r.counter_assignment = Some(assignment.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
            r.violated = Some(violated.to_string());
            r
        }
        Decision::Undecided { violated } => CheckReport::new(
            link,
            Verdict::StructurallyOk,
            format!("{resolved}; the target's taxonomic axioms do not entail {violated}, and no one-element model of the whole target refutes it, so entailment is undecided"),
        ),
        Decision::TooLarge { atoms } => CheckReport::new(
            link,
            Verdict::StructurallyOk,
            format!("{resolved}; {atoms} class names exceed the truth-table limit of {MAX_ATOMS}"),
        ),
    };
    (report, diags)
}

/// Checks an alignment structurally: each left side names a source entity
/// and each right side is built from target entities of the right kinds.
pub fn check_alignment(
    link: &Link,
    source: &SignatureAndSentences,
    target: &SignatureAndSentences,
) -> (CheckReport, Vec<Diagnostic>) {
    let LinkPayload::Correspondences(list) = &link.payload else {
        return (CheckReport::new(link, Verdict::Unsupported, "alignment without correspondences"), Vec::new());
    };
    if list.entries.is_empty() {
        let w = Diagnostic::new(Severity::Warning, "W106", format!("alignment <{}> has no correspondences", link.iri), None);
        return (CheckReport::new(link, Verdict::StructurallyOk, "no correspondences to check"), vec![w]);
    }
    let mut problems = Vec::new();
    for c in &list.entries {
        if source.entity(&c.left).is_none() {
            problems.push(format!("{} is not in the source", local(&c.left)));
        }
        let (mut classes, mut props) = (BTreeSet::new(), BTreeSet::new());
        c.right.class_names(&mut classes);
        c.right.property_names(&mut props);
        use crate::model::EntityKind::{Class, ObjectProperty};
        for (names, kind) in [(classes, Class), (props, ObjectProperty)] {
            for n in names {
                match target.entity(&n) {
                    None => problems.push(format!("{} is not in the target", local(&n))),
                    Some(e) if e.kind != kind => {
                        problems.push(format!("{} is a {} in the target, not a {kind}", local(&n), e.kind))
                    }
                    _ => {}
                }
            }
        }
    }
    let report = if problems.is_empty() {
        CheckReport::new(
            link,
            Verdict::StructurallyOk,
            format!("all {} correspondences are well-formed over the source and target signatures", list.entries.len()),
        )
    } else {
        CheckReport::new(link, Verdict::RefutedStructurally, problems.join("; "))
    };
    (report, Vec::new())
}

/// Conformance warnings for the declarations of inline blocks: inferred
/// logics, registry completions, IRI-less serializations and languages
/// without a logic.
pub fn lint_conformance(doc: &DistributedOntology, registry: &RegistryGraph, source_map: Option<&SourceMap>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (idx, item) in doc.items.iter().enumerate() {
        let blocks = item_exprs(item).into_iter().flat_map(|e| e.blocks());
        for (ordinal, b) in blocks.enumerate() {
            let span = source_map.and_then(|m| m.block(idx, ordinal).map(|r| m.span(r)));
            let mut push = |severity, code, message: String| out.push(Diagnostic::new(severity, code, message, span.clone()));
            let d = &b.decl;
            match registry.infer_triple(d.language.as_ref(), d.logic.as_ref(), d.serialization.as_ref()) {
                Ok(t) => {
                    if d.logic.is_none() {
                        push(Severity::Warning, "W102", format!("logic <{}> inferred, not declared", t.logic));
                    } else if d.language.is_none() || d.serialization.is_none() {
                        let mut filled = Vec::new();
                        if d.language.is_none() {
                            filled.push(format!("language <{}>", t.language));
                        }
                        if d.serialization.is_none() {
                            filled.push(format!("serialization <{}>", t.serialization));
                        }
                        push(Severity::Info, "I102", format!("registry completion: {}", filled.join(", ")));
                    }
                    if registry.serializations.get(&t.serialization).is_some_and(|s| !s.supports_iris) {
                        push(Severity::Warning, "W103", format!("serialization <{}> does not support IRIs", t.serialization));
                    }
                }
                Err(InferenceError::LogicUnknown(l)) => push(
                    Severity::Warning,
                    "W108",
                    format!("language <{l}> has no known logic, so the logic of this block cannot be inferred"),
                ),
                Err(_) => {}
            }
        }
    }
    out
}
