//! DOL RDF (structural description of a document) and the linked-data
//! export (one description per part).

use std::collections::HashMap;

use crate::adapters::manchester::{parse_class_expression, ManchesterPrinter};
use crate::adapters::turtle::{RdfTerm, RdfTriple};
use crate::iri::{Iri, PrefixMap};
use crate::known;
use crate::model::{
    collect_parts, sentence_iri, BasicOntologyBlock, Correspondence, CorrespondenceList, CorrespondenceRelation,
    DistributedOntology, Item, Link, LinkKind, LinkPayload, LogicDeclaration, OntologyDefinition, OntologyExpression,
    OntologyLike, PartKind, SymbolMap, SymbolRename,
};
use crate::vocab::{self, term};

const RDFS_IS_DEFINED_BY: &str = "http://www.w3.org/2000/01/rdf-schema#isDefinedBy";
const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

fn int(n: usize) -> RdfTerm {
    RdfTerm::Literal { lexical: n.to_string(), datatype: Some(term(XSD_INTEGER)), lang: None }
}

fn link_class(kind: LinkKind) -> &'static str {
    match kind {
        LinkKind::Interpretation => vocab::INTERPRETATION,
        LinkKind::Alignment => vocab::ALIGNMENT,
        LinkKind::Import => vocab::IMPORT,
        LinkKind::ConservativeExtensionClaim => vocab::CONSERVATIVE_EXTENSION_CLAIM,
        LinkKind::DefinitionalExtensionClaim => vocab::DEFINITIONAL_EXTENSION_CLAIM,
    }
}

/// Prefixes declared in exported Turtle: the document's own plus the usual
/// vocabularies.
pub fn export_prefixes(doc: &DistributedOntology) -> PrefixMap {
    let mut p = PrefixMap::new();
    p.bind("dol", vocab::NS);
    p.bind("rdf", known::RDF);
    p.bind("rdfs", known::RDFS);
    p.bind("xsd", known::XSD);
    for (l, ns) in doc.prefixes.iter() {
        if p.get(l).is_none() {
            p.bind(l, ns);
        }
    }
    p
}

struct Builder {
    triples: Vec<RdfTriple>,
    next: usize,
}

impl Builder {
    fn blank(&mut self) -> RdfTerm {
        self.next += 1;
        RdfTerm::Blank(format!("n{}", self.next))
    }

    fn add(&mut self, s: &RdfTerm, p: &str, o: RdfTerm) {
        self.triples.push(RdfTriple::new(s.clone(), term(p), o));
    }

    fn decl(&mut self, s: &RdfTerm, d: &LogicDeclaration) {
        for (p, v) in [
            (vocab::LANGUAGE, &d.language),
            (vocab::LOGIC_PROP, &d.logic),
            (vocab::SERIALIZATION_PROP, &d.serialization),
        ] {
            if let Some(v) = v {
                self.add(s, p, RdfTerm::iri(v));
            }
        }
    }

    fn renames(&mut self, s: &RdfTerm, rs: &[SymbolRename]) {
        for (i, r) in rs.iter().enumerate() {
            let n = self.blank();
            self.add(&n, known::RDF_TYPE, RdfTerm::iri(&term(vocab::SYMBOL_RENAME)));
            self.add(&n, vocab::RENAMES_FROM, RdfTerm::iri(&r.from));
            self.add(&n, vocab::RENAMES_TO, RdfTerm::iri(&r.to));
            self.add(&n, vocab::POSITION, int(i));
            self.add(s, vocab::RENAME, n);
        }
    }

    fn expr(&mut self, e: &OntologyExpression) -> RdfTerm {
        let n = self.blank();
        let ty = |c: &str| RdfTerm::iri(&term(c));
        match e {
            OntologyExpression::Reference(i) => {
                self.add(&n, known::RDF_TYPE, ty(vocab::REFERENCE));
                self.add(&n, vocab::REFERS_TO, RdfTerm::iri(i));
            }
            OntologyExpression::Inline(b) => {
                self.add(&n, known::RDF_TYPE, ty(vocab::BASIC_ONTOLOGY));
                self.decl(&n, &b.decl);
                self.add(&n, vocab::TEXT, RdfTerm::literal(b.text.clone()));
            }
            OntologyExpression::Extension(a, b) => {
                self.add(&n, known::RDF_TYPE, ty(vocab::EXTENSION));
                let (a, b) = (self.expr(a), self.expr(b));
                self.add(&n, vocab::BASE, a);
                self.add(&n, vocab::EXTENDED_BY, b);
            }
            OntologyExpression::Union(a, b) => {
                self.add(&n, known::RDF_TYPE, ty(vocab::UNION));
                let (a, b) = (self.expr(a), self.expr(b));
                self.add(&n, vocab::LEFT, a);
                self.add(&n, vocab::RIGHT, b);
            }
            OntologyExpression::Translation { base, mapping, renames } => {
                self.add(&n, known::RDF_TYPE, ty(vocab::TRANSLATION_EXPR));
                let b = self.expr(base);
                self.add(&n, vocab::BASE, b);
                if let Some(m) = mapping {
                    self.add(&n, vocab::MAPPING, RdfTerm::iri(m));
                }
                self.renames(&n, renames);
            }
            OntologyExpression::Projection { base, mapping } => {
                self.add(&n, known::RDF_TYPE, ty(vocab::PROJECTION_EXPR));
                let b = self.expr(base);
                self.add(&n, vocab::BASE, b);
                self.add(&n, vocab::MAPPING, RdfTerm::iri(mapping));
            }
            OntologyExpression::ContextShift { decl, inner } => {
                self.add(&n, known::RDF_TYPE, ty(vocab::CONTEXT_SHIFT));
                self.decl(&n, decl);
                let i = self.expr(inner);
                self.add(&n, vocab::INNER, i);
            }
        }
        n
    }

    fn link(&mut self, l: &Link) -> RdfTerm {
        let s = RdfTerm::iri(&l.iri);
        self.add(&s, known::RDF_TYPE, RdfTerm::iri(&term(link_class(l.kind))));
        let (src, tgt) = (self.expr(&l.source), self.expr(&l.target));
        self.add(&s, vocab::SOURCE, src);
        self.add(&s, vocab::TARGET, tgt);
        match &l.payload {
            LinkPayload::SymbolMap(m) => {
                let n = self.blank();
                self.add(&n, known::RDF_TYPE, RdfTerm::iri(&term(vocab::SYMBOL_MAP)));
                if let Some(t) = &m.translation {
                    self.add(&n, vocab::MAPPING, RdfTerm::iri(t));
                }
                self.renames(&n, &m.renames);
                self.add(&s, vocab::SYMBOL_MAP_PROP, n);
            }
            LinkPayload::Correspondences(c) => {
                let empty = PrefixMap::new();
                let p = ManchesterPrinter { prefixes: &empty, local_names: false };
                for (i, e) in c.entries.iter().enumerate() {
                    let n = self.blank();
                    self.add(&n, known::RDF_TYPE, RdfTerm::iri(&term(vocab::CORRESPONDENCE)));
                    self.add(&n, vocab::CORRESPONDENCE_LEFT, RdfTerm::iri(&e.left));
                    self.add(&n, vocab::RELATION, RdfTerm::literal(e.relation.as_str()));
                    self.add(&n, vocab::TERM, RdfTerm::literal(p.class_expr(&e.right)));
                    self.add(&n, vocab::POSITION, int(i));
                    self.add(&s, vocab::CORRESPONDS, n);
                }
            }
        }
        s
    }
}

/// Structural description of the whole document; [`read_dol_rdf`] inverts it.
pub fn dol_rdf(doc: &DistributedOntology) -> Vec<RdfTriple> {
    let mut b = Builder { triples: Vec::new(), next: 0 };
    let root = match &doc.iri {
        Some(i) => RdfTerm::iri(i),
        None => RdfTerm::Blank("doc".into()),
    };
    b.add(&root, known::RDF_TYPE, RdfTerm::iri(&term(vocab::DISTRIBUTED_ONTOLOGY)));
    for (label, ns) in doc.prefixes.iter() {
        let n = b.blank();
        b.add(&n, known::RDF_TYPE, RdfTerm::iri(&term(vocab::PREFIX_BINDING)));
        b.add(&n, vocab::PREFIX_LABEL, RdfTerm::literal(label));
        b.add(&n, vocab::NAMESPACE, RdfTerm::literal(ns));
        b.add(&root, vocab::PREFIX, n);
    }
    for (pos, item) in doc.items.iter().enumerate() {
        let s = match item {
            Item::Logic(d) => {
                let n = b.blank();
                b.add(&n, known::RDF_TYPE, RdfTerm::iri(&term(vocab::LOGIC_DECLARATION)));
                b.decl(&n, d);
                n
            }
            Item::Definition(d) => {
                let s = RdfTerm::iri(&d.iri);
                b.add(&s, known::RDF_TYPE, RdfTerm::iri(&term(vocab::ONTOLOGY)));
                let body = b.expr(&d.body);
                b.add(&s, vocab::BODY, body);
                s
            }
            Item::Link(l) => b.link(l),
        };
        // Positions sit on a wrapper so repeated IRIs stay distinct items.
        let w = b.blank();
        b.add(&w, vocab::POSITION, int(pos));
        b.add(&w, vocab::DEFINES, s);
        b.add(&root, vocab::HAS_ITEM, w);
    }
    b.triples
}

/// Error reading a structural description back.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct RdfReadError(pub String);

struct Graph<'a> {
    by_subject: HashMap<&'a RdfTerm, Vec<&'a RdfTriple>>,
}

impl<'a> Graph<'a> {
    fn new(triples: &'a [RdfTriple]) -> Self {
        let mut by_subject: HashMap<&RdfTerm, Vec<&RdfTriple>> = HashMap::new();
        for t in triples {
            by_subject.entry(&t.subject).or_default().push(t);
        }
        Graph { by_subject }
    }

    fn all(&self, s: &RdfTerm, p: &str) -> Vec<&'a RdfTerm> {
        self.by_subject.get(s).map_or_else(Vec::new, |ts| {
            ts.iter().filter(|t| t.predicate.as_str() == p).map(|t| &t.object).collect()
        })
    }

    fn one(&self, s: &RdfTerm, p: &str) -> Option<&'a RdfTerm> {
        self.all(s, p).into_iter().next()
    }

    fn need(&self, s: &RdfTerm, p: &str) -> Result<&'a RdfTerm, RdfReadError> {
        self.one(s, p).ok_or_else(|| RdfReadError(format!("{s:?} lacks {p}")))
    }

    fn iri(&self, s: &RdfTerm, p: &str) -> Result<Option<Iri>, RdfReadError> {
        match self.one(s, p) {
            None => Ok(None),
            Some(RdfTerm::Iri(i)) => Ok(Some(i.clone())),
            Some(o) => Err(RdfReadError(format!("{p} of {s:?} is not an IRI: {o:?}"))),
        }
    }

    fn need_iri(&self, s: &RdfTerm, p: &str) -> Result<Iri, RdfReadError> {
        self.iri(s, p)?.ok_or_else(|| RdfReadError(format!("{s:?} lacks {p}")))
    }

    fn lit(&self, s: &RdfTerm, p: &str) -> Result<String, RdfReadError> {
        match self.need(s, p)? {
            RdfTerm::Literal { lexical, .. } => Ok(lexical.clone()),
            o => Err(RdfReadError(format!("{p} of {s:?} is not a literal: {o:?}"))),
        }
    }

    fn position(&self, s: &RdfTerm) -> usize {
        self.lit(s, vocab::POSITION).ok().and_then(|l| l.parse().ok()).unwrap_or(usize::MAX)
    }

    fn types(&self, s: &RdfTerm) -> Vec<&'a str> {
        self.all(s, known::RDF_TYPE).into_iter().filter_map(|t| t.as_iri().map(Iri::as_str)).collect()
    }

    fn sorted(&self, s: &RdfTerm, p: &str) -> Vec<&'a RdfTerm> {
        let mut v = self.all(s, p);
        v.sort_by_key(|n| self.position(n));
        v
    }

    fn decl(&self, s: &RdfTerm) -> Result<LogicDeclaration, RdfReadError> {
        Ok(LogicDeclaration {
            language: self.iri(s, vocab::LANGUAGE)?,
            logic: self.iri(s, vocab::LOGIC_PROP)?,
            serialization: self.iri(s, vocab::SERIALIZATION_PROP)?,
        })
    }

    fn renames(&self, s: &RdfTerm) -> Result<Vec<SymbolRename>, RdfReadError> {
        self.sorted(s, vocab::RENAME)
            .into_iter()
            .map(|n| Ok(SymbolRename { from: self.need_iri(n, vocab::RENAMES_FROM)?, to: self.need_iri(n, vocab::RENAMES_TO)? }))
            .collect()
    }

    fn expr(&self, s: &RdfTerm) -> Result<OntologyExpression, RdfReadError> {
        let sub = |p: &str| -> Result<Box<OntologyExpression>, RdfReadError> { Ok(Box::new(self.expr(self.need(s, p)?)?)) };
        let types = self.types(s);
        let is = |c: &str| types.contains(&c);
        Ok(if is(vocab::REFERENCE) {
            OntologyExpression::Reference(self.need_iri(s, vocab::REFERS_TO)?)
        } else if is(vocab::BASIC_ONTOLOGY) {
            OntologyExpression::Inline(BasicOntologyBlock::new(self.decl(s)?, self.lit(s, vocab::TEXT)?))
        } else if is(vocab::EXTENSION) {
            OntologyExpression::Extension(sub(vocab::BASE)?, sub(vocab::EXTENDED_BY)?)
        } else if is(vocab::UNION) {
            OntologyExpression::Union(sub(vocab::LEFT)?, sub(vocab::RIGHT)?)
        } else if is(vocab::TRANSLATION_EXPR) {
            OntologyExpression::Translation {
                base: sub(vocab::BASE)?,
                mapping: self.iri(s, vocab::MAPPING)?,
                renames: self.renames(s)?,
            }
        } else if is(vocab::PROJECTION_EXPR) {
            OntologyExpression::Projection { base: sub(vocab::BASE)?, mapping: self.need_iri(s, vocab::MAPPING)? }
        } else if is(vocab::CONTEXT_SHIFT) {
            OntologyExpression::ContextShift { decl: self.decl(s)?, inner: sub(vocab::INNER)? }
        } else {
            return Err(RdfReadError(format!("{s:?} is not an ontology expression")));
        })
    }

    fn link(&self, s: &RdfTerm, kind: LinkKind) -> Result<Link, RdfReadError> {
        let Some(iri) = s.as_iri().cloned() else { return Err(RdfReadError("a link needs an IRI".into())) };
        let payload = if kind == LinkKind::Alignment {
            let mut entries = Vec::new();
            for n in self.sorted(s, vocab::CORRESPONDS) {
                let rel = self.lit(n, vocab::RELATION)?;
                let relation =
                    CorrespondenceRelation::parse(&rel).ok_or_else(|| RdfReadError(format!("bad relation `{rel}`")))?;
                let right = parse_class_expression(&self.lit(n, vocab::TERM)?, &PrefixMap::new())
                    .map_err(|e| RdfReadError(e.message))?;
                entries.push(Correspondence { left: self.need_iri(n, vocab::CORRESPONDENCE_LEFT)?, relation, right });
            }
            LinkPayload::Correspondences(CorrespondenceList { entries })
        } else {
            let m = self.need(s, vocab::SYMBOL_MAP_PROP)?;
            LinkPayload::SymbolMap(SymbolMap { translation: self.iri(m, vocab::MAPPING)?, renames: self.renames(m)? })
        };
        Ok(Link {
            iri,
            kind,
            source: self.expr(self.need(s, vocab::SOURCE)?)?,
            target: self.expr(self.need(s, vocab::TARGET)?)?,
            payload,
        })
    }
}

/// Rebuilds a document from its structural description.
pub fn read_dol_rdf(triples: &[RdfTriple]) -> Result<DistributedOntology, RdfReadError> {
    let g = Graph::new(triples);
    let roots: Vec<&RdfTerm> = triples
        .iter()
        .filter(|t| t.predicate.as_str() == known::RDF_TYPE && t.object.as_iri().map(Iri::as_str) == Some(vocab::DISTRIBUTED_ONTOLOGY))
        .map(|t| &t.subject)
        .collect();
    let [root] = roots.as_slice() else {
        return Err(RdfReadError(format!("expected one distributed ontology, found {}", roots.len())));
    };
    let mut doc = DistributedOntology { iri: root.as_iri().cloned(), ..Default::default() };
    let mut bindings: Vec<(String, String)> = Vec::new();
    for p in g.all(root, vocab::PREFIX) {
        bindings.push((g.lit(p, vocab::PREFIX_LABEL)?, g.lit(p, vocab::NAMESPACE)?));
    }
    bindings.sort();
    for (l, ns) in bindings {
        doc.prefixes.bind(l, ns);
    }
    for w in g.sorted(root, vocab::HAS_ITEM) {
        let s = g.need(w, vocab::DEFINES)?;
        let types = g.types(s);
        let item = if types.contains(&vocab::LOGIC_DECLARATION) {
            Item::Logic(g.decl(s)?)
        } else if types.contains(&vocab::ONTOLOGY) {
            let iri = s.as_iri().cloned().ok_or_else(|| RdfReadError("an ontology needs an IRI".into()))?;
            Item::Definition(OntologyDefinition { iri, body: g.expr(g.need(s, vocab::BODY)?)? })
        } else {
            let kind = [
                LinkKind::Interpretation,
                LinkKind::Alignment,
                LinkKind::Import,
                LinkKind::ConservativeExtensionClaim,
                LinkKind::DefinitionalExtensionClaim,
            ]
            .into_iter()
            .find(|k| types.contains(&link_class(*k)))
            .ok_or_else(|| RdfReadError(format!("{s:?} has no item type")))?;
            Item::Link(g.link(s, kind)?)
        };
        doc.items.push(item);
    }
    Ok(doc)
}

fn part_class(kind: PartKind) -> &'static str {
    match kind {
        PartKind::DistributedOntology => vocab::DISTRIBUTED_ONTOLOGY,
        PartKind::Ontology => vocab::ONTOLOGY,
        PartKind::Link(k) => link_class(k),
        PartKind::Entity(_) => vocab::ENTITY,
        PartKind::Sentence => vocab::SENTENCE,
    }
}

/// One description per document part, each `rdfs:isDefinedBy base`.
pub fn linked_data(doc: &DistributedOntology, base: &Iri) -> Vec<RdfTriple> {
    // Owner of each entity and sentence: the first definition mentioning it.
    let mut owner: HashMap<Iri, Iri> = HashMap::new();
    let mut counts: HashMap<Iri, (usize, usize)> = HashMap::new();
    for def in doc.definitions() {
        let mut index = 0;
        let (mut entities, mut sentences) = (0, 0);
        for block in def.body.blocks() {
            let Some(sig) = &block.extracted else { continue };
            for (iri, _) in sig.part_entities() {
                entities += 1;
                owner.entry(iri).or_insert_with(|| def.iri.clone());
            }
            for _ in sig.part_sentences() {
                sentences += 1;
                owner.entry(sentence_iri(&def.iri, index)).or_insert_with(|| def.iri.clone());
                index += 1;
            }
        }
        counts.insert(def.iri.clone(), (entities, sentences));
    }
    let mut out = Vec::new();
    let mut add = |s: &Iri, p: &str, o: RdfTerm| out.push(RdfTriple::new(RdfTerm::iri(s), term(p), o));
    for (iri, kind) in collect_parts(doc) {
        add(&iri, known::RDF_TYPE, RdfTerm::iri(&term(part_class(kind))));
        add(&iri, RDFS_IS_DEFINED_BY, RdfTerm::iri(base));
        match kind {
            PartKind::DistributedOntology => {}
            PartKind::Ontology => {
                if let Some(d) = &doc.iri {
                    add(&iri, vocab::PART_OF, RdfTerm::iri(d));
                }
                let (e, s) = counts.get(&iri).copied().unwrap_or_default();
                add(&iri, vocab::ENTITY_COUNT, int(e));
                add(&iri, vocab::SENTENCE_COUNT, int(s));
            }
            PartKind::Link(_) => {
                if let Some(d) = &doc.iri {
                    add(&iri, vocab::PART_OF, RdfTerm::iri(d));
                }
                if let Some(l) = doc.link(&iri) {
                    for (p, e) in [(vocab::SOURCE, &l.source), (vocab::TARGET, &l.target)] {
                        if let OntologyExpression::Reference(r) = e {
                            add(&iri, p, RdfTerm::iri(r));
                        }
                    }
                }
            }
            PartKind::Entity(k) => {
                add(&iri, vocab::ENTITY_KIND, RdfTerm::literal(k.as_str()));
                if let Some(o) = owner.get(&iri) {
                    add(&iri, vocab::PART_OF, RdfTerm::iri(o));
                }
            }
            PartKind::Sentence => {
                if let Some(o) = owner.get(&iri) {
                    add(&iri, vocab::PART_OF, RdfTerm::iri(o));
                }
            }
        }
    }
    out
}
