//! Structural model of distributed ontologies.
//!
//! The model is the abstract syntax shared by the text, XML and RDF
//! serializations. Source positions live in the parser's
//! [`SourceMap`](crate::parser::SourceMap), so two models compare equal iff
//! they are structurally equal.

use std::fmt;
use std::ops::Range;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::adapters::clif::ClifSentence;
use crate::adapters::manchester::{ClassExpr, ManchesterAxiom};
use crate::adapters::prop::Formula;
use crate::adapters::turtle::RdfTriple;
use crate::iri::{Iri, IriError, PrefixMap};

/// Language, logic and serialization in effect for basic ontologies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LogicDeclaration {
    pub language: Option<Iri>,
    pub logic: Option<Iri>,
    pub serialization: Option<Iri>,
}

impl LogicDeclaration {
    pub fn is_empty(&self) -> bool {
        self.language.is_none() && self.logic.is_none() && self.serialization.is_none()
    }

    pub fn is_complete(&self) -> bool {
        self.language.is_some() && self.logic.is_some() && self.serialization.is_some()
    }

    /// The context after `self` is declared inside `outer`. Naming a
    /// language or a logic starts a fresh context; naming only a
    /// serialization keeps the outer language and logic.
    pub fn shifted_from(&self, outer: &LogicDeclaration) -> LogicDeclaration {
        if self.language.is_some() || self.logic.is_some() {
            self.clone()
        } else {
            LogicDeclaration {
                language: outer.language.clone(),
                logic: outer.logic.clone(),
                serialization: self.serialization.clone().or_else(|| outer.serialization.clone()),
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DistributedOntology {
    /// `None` only for documents without a `distributed-ontology` header.
    pub iri: Option<Iri>,
    pub prefixes: PrefixMap,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Logic(LogicDeclaration),
    Definition(OntologyDefinition),
    Link(Link),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OntologyDefinition {
    pub iri: Iri,
    pub body: OntologyExpression,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolRename {
    pub from: Iri,
    pub to: Iri,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OntologyExpression {
    Reference(Iri),
    Inline(BasicOntologyBlock),
    /// `base then ext`
    Extension(Box<OntologyExpression>, Box<OntologyExpression>),
    /// `left and right`
    Union(Box<OntologyExpression>, Box<OntologyExpression>),
    Translation { base: Box<OntologyExpression>, mapping: Option<Iri>, renames: Vec<SymbolRename> },
    Projection { base: Box<OntologyExpression>, mapping: Iri },
    /// `language … logic … syntax … : inner`
    ContextShift { decl: LogicDeclaration, inner: Box<OntologyExpression> },
}

impl OntologyExpression {
    pub fn reference(iri: Iri) -> Self {
        OntologyExpression::Reference(iri)
    }

    pub fn then(self, ext: OntologyExpression) -> Self {
        OntologyExpression::Extension(Box::new(self), Box::new(ext))
    }

    pub fn and(self, right: OntologyExpression) -> Self {
        OntologyExpression::Union(Box::new(self), Box::new(right))
    }

    /// Pre-order walk over all sub-expressions.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a OntologyExpression)) {
        f(self);
        match self {
            OntologyExpression::Reference(_) | OntologyExpression::Inline(_) => {}
            OntologyExpression::Extension(a, b) | OntologyExpression::Union(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            OntologyExpression::Translation { base, .. } | OntologyExpression::Projection { base, .. } => base.walk(f),
            OntologyExpression::ContextShift { inner, .. } => inner.walk(f),
        }
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut OntologyExpression)) {
        f(self);
        match self {
            OntologyExpression::Reference(_) | OntologyExpression::Inline(_) => {}
            OntologyExpression::Extension(a, b) | OntologyExpression::Union(a, b) => {
                a.walk_mut(f);
                b.walk_mut(f);
            }
            OntologyExpression::Translation { base, .. } | OntologyExpression::Projection { base, .. } => {
                base.walk_mut(f)
            }
            OntologyExpression::ContextShift { inner, .. } => inner.walk_mut(f),
        }
    }

    /// Inline blocks in evaluation order.
    pub fn blocks(&self) -> Vec<&BasicOntologyBlock> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let OntologyExpression::Inline(b) = e {
                out.push(b);
            }
        });
        out
    }
}

/// Embedded basic ontology, kept verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicOntologyBlock {
    /// Declaration in effect where the block appears, before registry
    /// completion.
    pub decl: LogicDeclaration,
    pub text: String,
    pub extracted: Option<SignatureAndSentences>,
}

impl BasicOntologyBlock {
    pub fn new(decl: LogicDeclaration, text: impl Into<String>) -> Self {
        BasicOntologyBlock { decl, text: text.into(), extracted: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntityKind {
    Proposition,
    Class,
    ObjectProperty,
    Individual,
    ClName,
    ClSequenceMarker,
    RdfResource,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Proposition => "proposition",
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "object-property",
            EntityKind::Individual => "individual",
            EntityKind::ClName => "cl-name",
            EntityKind::ClSequenceMarker => "cl-sequence-marker",
            EntityKind::RdfResource => "rdf-resource",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "proposition" => EntityKind::Proposition,
            "class" => EntityKind::Class,
            "object-property" => EntityKind::ObjectProperty,
            "individual" => EntityKind::Individual,
            "cl-name" => EntityKind::ClName,
            "cl-sequence-marker" => EntityKind::ClSequenceMarker,
            "rdf-resource" => EntityKind::RdfResource,
            _ => return None,
        })
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub iri: Iri,
    pub kind: EntityKind,
    /// Declared (e.g. by `props` or a frame) rather than merely referenced.
    pub declared: bool,
}

/// Logic-specific abstract sentence.
#[derive(Debug, Clone, PartialEq)]
pub enum SentenceForm {
    Prop(Formula),
    Owl(ManchesterAxiom),
    Clif(ClifSentence),
    Rdf(RdfTriple),
}

impl fmt::Display for SentenceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SentenceForm::Prop(p) => write!(f, "{p}"),
            SentenceForm::Owl(a) => write!(f, "{a}"),
            SentenceForm::Clif(c) => write!(f, "{c}"),
            SentenceForm::Rdf(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub logic: Iri,
    pub form: SentenceForm,
    /// Byte range in the embedding block; `None` for derived sentences.
    pub span: Option<Range<usize>>,
}

/// Extracted structure of a basic ontology.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureAndSentences {
    pub logic: Iri,
    pub entities: IndexMap<Iri, Entity>,
    pub sentences: Vec<Sentence>,
    pub imports: Vec<Iri>,
}

/// Two entities with one IRI and different kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindClash {
    pub iri: Iri,
    pub first: EntityKind,
    pub second: EntityKind,
}

impl SignatureAndSentences {
    pub fn empty(logic: Iri) -> Self {
        SignatureAndSentences { logic, entities: IndexMap::new(), sentences: Vec::new(), imports: Vec::new() }
    }

    /// Adds an entity; a declaration upgrades an earlier reference.
    pub fn add_entity(&mut self, entity: Entity) -> Result<(), KindClash> {
        match self.entities.get_mut(&entity.iri) {
            Some(existing) if existing.kind != entity.kind => {
                Err(KindClash { iri: entity.iri, first: existing.kind, second: entity.kind })
            }
            Some(existing) => {
                existing.declared |= entity.declared;
                Ok(())
            }
            None => {
                self.entities.insert(entity.iri.clone(), entity);
                Ok(())
            }
        }
    }

    pub fn push_sentence(&mut self, form: SentenceForm, span: Option<Range<usize>>) {
        self.sentences.push(Sentence { logic: self.logic.clone(), form, span });
    }

    /// Merges `other` into `self` (same logic assumed): same-IRI entities
    /// are identified, sentences concatenated, imports unioned.
    pub fn merge(&mut self, other: &SignatureAndSentences) -> Result<(), KindClash> {
        for e in other.entities.values() {
            self.add_entity(e.clone())?;
        }
        for s in &other.sentences {
            if !self.sentences.contains(s) {
                self.sentences.push(s.clone());
            }
        }
        for i in &other.imports {
            if !self.imports.contains(i) {
                self.imports.push(i.clone());
            }
        }
        Ok(())
    }

    pub fn entity(&self, iri: &Iri) -> Option<&Entity> {
        self.entities.get(iri)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkKind {
    Interpretation,
    Alignment,
    Import,
    ConservativeExtensionClaim,
    DefinitionalExtensionClaim,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::Interpretation => "interpretation",
            LinkKind::Alignment => "alignment",
            LinkKind::Import => "import",
            LinkKind::ConservativeExtensionClaim => "conservative-extension-claim",
            LinkKind::DefinitionalExtensionClaim => "definitional-extension-claim",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "interpretation" => LinkKind::Interpretation,
            "alignment" => LinkKind::Alignment,
            "import" => LinkKind::Import,
            "conservative-extension-claim" => LinkKind::ConservativeExtensionClaim,
            "definitional-extension-claim" => LinkKind::DefinitionalExtensionClaim,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolMap {
    pub translation: Option<Iri>,
    pub renames: Vec<SymbolRename>,
}

impl SymbolMap {
    /// The first symbol mapped more than once, if any.
    pub fn duplicate_source(&self) -> Option<&Iri> {
        self.renames
            .iter()
            .enumerate()
            .find(|(i, r)| self.renames[..*i].iter().any(|p| p.from == r.from))
            .map(|(_, r)| &r.from)
    }

    pub fn target_of<'a>(&'a self, from: &'a Iri) -> &'a Iri {
        self.renames.iter().find(|r| &r.from == from).map_or(from, |r| &r.to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrespondenceRelation {
    Equivalence,
    Subsumes,
    SubsumedBy,
}

impl CorrespondenceRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrespondenceRelation::Equivalence => "equivalence",
            CorrespondenceRelation::Subsumes => "subsumes",
            CorrespondenceRelation::SubsumedBy => "subsumed-by",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "equivalence" => CorrespondenceRelation::Equivalence,
            "subsumes" => CorrespondenceRelation::Subsumes,
            "subsumed-by" => CorrespondenceRelation::SubsumedBy,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    pub left: Iri,
    pub relation: CorrespondenceRelation,
    pub right: ClassExpr,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorrespondenceList {
    pub entries: Vec<Correspondence>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinkPayload {
    SymbolMap(SymbolMap),
    Correspondences(CorrespondenceList),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub iri: Iri,
    pub kind: LinkKind,
    pub source: OntologyExpression,
    pub target: OntologyExpression,
    pub payload: LinkPayload,
}

impl Link {
    /// `true` when the payload variant matches the link kind.
    pub fn payload_matches_kind(&self) -> bool {
        matches!(
            (&self.kind, &self.payload),
            (LinkKind::Alignment, LinkPayload::Correspondences(_))
                | (
                    LinkKind::Interpretation
                        | LinkKind::Import
                        | LinkKind::ConservativeExtensionClaim
                        | LinkKind::DefinitionalExtensionClaim,
                    LinkPayload::SymbolMap(_)
                )
        )
    }
}

impl DistributedOntology {
    pub fn definitions(&self) -> impl Iterator<Item = &OntologyDefinition> {
        self.items.iter().filter_map(|i| match i {
            Item::Definition(d) => Some(d),
            _ => None,
        })
    }

    pub fn links(&self) -> impl Iterator<Item = &Link> {
        self.items.iter().filter_map(|i| match i {
            Item::Link(l) => Some(l),
            _ => None,
        })
    }

    pub fn definition(&self, iri: &Iri) -> Option<&OntologyDefinition> {
        self.definitions().find(|d| &d.iri == iri)
    }

    pub fn link(&self, iri: &Iri) -> Option<&Link> {
        self.links().find(|l| &l.iri == iri)
    }

    /// `true` once every inline block carries its extracted structure.
    pub fn is_analyzed(&self) -> bool {
        self.definitions().all(|d| d.body.blocks().iter().all(|b| b.extracted.is_some()))
    }
}

/// The IRI named after `distributed-ontology`: bare names expand against the
/// empty prefix.
pub fn document_iri_of(name: &str, prefixes: &PrefixMap) -> Result<Iri, IriError> {
    prefixes.resolve(name)
}

/// What a row of [`collect_parts`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartKind {
    DistributedOntology,
    Ontology,
    Link(LinkKind),
    Entity(EntityKind),
    Sentence,
}

impl PartKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PartKind::DistributedOntology => "distributed-ontology",
            PartKind::Ontology => "ontology",
            PartKind::Link(k) => k.as_str(),
            PartKind::Entity(k) => k.as_str(),
            PartKind::Sentence => "sentence",
        }
    }
}

/// The part-enumeration view shared by basic and distributed ontologies:
/// a distributed ontology's entities are its ontologies and its sentences
/// are its links.
pub trait OntologyLike {
    fn part_entities(&self) -> Vec<(Iri, PartKind)>;
    fn part_sentences(&self) -> Vec<PartKind>;
}

impl OntologyLike for SignatureAndSentences {
    fn part_entities(&self) -> Vec<(Iri, PartKind)> {
        self.entities.values().map(|e| (e.iri.clone(), PartKind::Entity(e.kind))).collect()
    }

    fn part_sentences(&self) -> Vec<PartKind> {
        vec![PartKind::Sentence; self.sentences.len()]
    }
}

impl OntologyLike for DistributedOntology {
    fn part_entities(&self) -> Vec<(Iri, PartKind)> {
        self.definitions().map(|d| (d.iri.clone(), PartKind::Ontology)).collect()
    }

    fn part_sentences(&self) -> Vec<PartKind> {
        self.links().map(|l| PartKind::Link(l.kind)).collect()
    }
}

/// IRI of the `index`-th sentence of an ontology.
pub fn sentence_iri(ontology: &Iri, index: usize) -> Iri {
    ontology.join(&format!("//sentence/{index}")).expect("suffix keeps the IRI absolute")
}

/// One row per distributed ontology, ontology definition, link, entity and
/// sentence. Entities shared by several blocks are listed once; sentences
/// are numbered per definition across its inline blocks.
pub fn collect_parts(doc: &DistributedOntology) -> Vec<(Iri, PartKind)> {
    let mut rows = Vec::new();
    if let Some(iri) = &doc.iri {
        rows.push((iri.clone(), PartKind::DistributedOntology));
    }
    rows.extend(doc.part_entities());
    rows.extend(doc.links().zip(doc.part_sentences()).map(|(l, k)| (l.iri.clone(), k)));
    let mut seen: std::collections::HashSet<Iri> = rows.iter().map(|(i, _)| i.clone()).collect();
    for def in doc.definitions() {
        let mut index = 0;
        for block in def.body.blocks() {
            let Some(sig) = &block.extracted else { continue };
            for (iri, kind) in sig.part_entities() {
                if seen.insert(iri.clone()) {
                    rows.push((iri, kind));
                }
            }
            for kind in sig.part_sentences() {
                let iri = sentence_iri(&def.iri, index);
                index += 1;
                if seen.insert(iri.clone()) {
                    rows.push((iri, kind));
                }
            }
        }
    }
    rows
}
