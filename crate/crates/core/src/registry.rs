//! Registry of logics, ontology languages, serializations and the mappings
//! between them.
//!
//! The registry answers two questions for the analyzer: which triple of
//! language, logic and serialization a partial declaration stands for, and
//! which default translation connects two logics. A built-in seed ships with
//! the crate; `--registry <file>` replaces it with a JSON document of the
//! same shape (see `docs/registry-schema.md`).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapters::turtle::{write_turtle, RdfTerm, RdfTriple};
use crate::iri::{Iri, PrefixMap};
use crate::known;
use crate::vocab;

/// The seed registry shipped with the crate.
pub const SEED_JSON: &str = include_str!("../registry/seed.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct LogicDesc {
    pub iri: Iri,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct LanguageDesc {
    pub iri: Iri,
    /// `None` when the language has no agreed logic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<Iri>,
    #[serde(default)]
    pub serializations: BTreeSet<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sublanguage_of: Option<Iri>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SerializationDesc {
    pub iri: Iri,
    pub supports_iris: bool,
    /// File name extensions (without the dot) used to pick this
    /// serialization for external files.
    #[serde(default)]
    pub extensions: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    Translation,
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingLevel {
    /// Endpoints are logics.
    Logic,
    /// Endpoints are languages.
    Language,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct MappingDesc {
    pub iri: Iri,
    pub kind: MappingKind,
    pub level: MappingLevel,
    pub source: Iri,
    pub target: Iri,
    #[serde(default)]
    pub default: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint_of: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backed_by: Option<Iri>,
}

/// The on-disk shape: four arrays.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryFile {
    #[serde(default)]
    pub logics: Vec<LogicDesc>,
    #[serde(default)]
    pub languages: Vec<LanguageDesc>,
    #[serde(default)]
    pub serializations: Vec<SerializationDesc>,
    #[serde(default)]
    pub mappings: Vec<MappingDesc>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegistryGraph {
    pub logics: BTreeMap<Iri, LogicDesc>,
    pub languages: BTreeMap<Iri, LanguageDesc>,
    pub serializations: BTreeMap<Iri, SerializationDesc>,
    pub mappings: BTreeMap<Iri, MappingDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("registry is not valid JSON: {0}")]
    Json(String),
    #[error("<{0}> is registered more than once")]
    Duplicate(Iri),
    #[error("{entry} refers to unknown {what} <{iri}>")]
    Dangling { entry: Iri, what: &'static str, iri: Iri },
    #[error("serialization <{0}> is not supported by any language")]
    Orphan(Iri),
    #[error("sublanguage cycle through <{0}>")]
    SublanguageCycle(Iri),
    #[error("two default translations from <{source_iri}> to <{target}>: <{first}> and <{second}>")]
    TwoDefaults { source_iri: Iri, target: Iri, first: Iri, second: Iri },
    #[error("<{0}>: adjoint-of must link a projection to a translation with swapped endpoints")]
    BadAdjoint(Iri),
    #[error("<{0}>: backed-by must name a logic-level mapping of the same kind between the languages' logics")]
    BadBacking(Iri),
    #[error("registry RDF: {0}")]
    Rdf(String),
}

/// A completed declaration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub language: Iri,
    pub logic: Iri,
    pub serialization: Iri,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("nothing to infer from: no language, logic or serialization given")]
    Empty,
    #[error("<{0}> is not in the registry")]
    Unknown(Iri),
    #[error("language <{0}> has no known logic, so nothing can be inferred from it")]
    LogicUnknown(Iri),
    #[error("the given language, logic and serialization are not related in the registry")]
    Inconsistent,
    #[error("ambiguous: {} candidates ({})", candidates.len(), candidates.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("; "))]
    Ambiguous { candidates: Vec<Triple> },
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "language <{}>, logic <{}>, serialization <{}>", self.language, self.logic, self.serialization)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("logic <{0}> is not in the registry")]
    UnknownLogic(Iri),
    #[error("no default translation path from <{source_iri}> to <{target}>")]
    NoPath { source_iri: Iri, target: Iri },
    #[error("ambiguous default translation from <{source_iri}> to <{target}>: {} shortest paths", paths.len())]
    Ambiguous { source_iri: Iri, target: Iri, paths: Vec<Vec<Iri>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingLookupError {
    #[error("mapping <{0}> is not in the registry")]
    Unknown(Iri),
    #[error("language-level mapping <{0}> is not backed by a logic-level mapping")]
    Unbacked(Iri),
}

impl RegistryGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The seed registry.
    pub fn builtin() -> Self {
        load_registry(SEED_JSON).expect("seed registry is valid")
    }

    pub fn from_file(file: RegistryFile) -> Result<Self, RegistryError> {
        let mut g = RegistryGraph::default();
        let mut seen = BTreeSet::new();
        let mut fresh = |iri: &Iri| if seen.insert(iri.clone()) { Ok(()) } else { Err(RegistryError::Duplicate(iri.clone())) };
        for l in file.logics {
            fresh(&l.iri)?;
            g.logics.insert(l.iri.clone(), l);
        }
        for l in file.languages {
            fresh(&l.iri)?;
            g.languages.insert(l.iri.clone(), l);
        }
        for s in file.serializations {
            fresh(&s.iri)?;
            g.serializations.insert(s.iri.clone(), s);
        }
        for m in file.mappings {
            fresh(&m.iri)?;
            g.mappings.insert(m.iri.clone(), m);
        }
        g.validate()?;
        Ok(g)
    }

    pub fn to_file(&self) -> RegistryFile {
        RegistryFile {
            logics: self.logics.values().cloned().collect(),
            languages: self.languages.values().cloned().collect(),
            serializations: self.serializations.values().cloned().collect(),
            mappings: self.mappings.values().cloned().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("registry serializes")
    }

    fn validate(&self) -> Result<(), RegistryError> {
        let dangling = |entry: &Iri, what, iri: &Iri| RegistryError::Dangling { entry: entry.clone(), what, iri: iri.clone() };
        for l in self.languages.values() {
            if let Some(logic) = &l.logic {
                if !self.logics.contains_key(logic) {
                    return Err(dangling(&l.iri, "logic", logic));
                }
            }
            for s in &l.serializations {
                if !self.serializations.contains_key(s) {
                    return Err(dangling(&l.iri, "serialization", s));
                }
            }
            if let Some(sup) = &l.sublanguage_of {
                if !self.languages.contains_key(sup) {
                    return Err(dangling(&l.iri, "language", sup));
                }
            }
        }
        for l in self.languages.values() {
            let mut cur = l.sublanguage_of.as_ref();
            let mut steps = 0;
            while let Some(next) = cur {
                steps += 1;
                if next == &l.iri || steps > self.languages.len() {
                    return Err(RegistryError::SublanguageCycle(l.iri.clone()));
                }
                cur = self.languages[next].sublanguage_of.as_ref();
            }
        }
        for s in self.serializations.values() {
            if !self.languages.values().any(|l| l.serializations.contains(&s.iri)) {
                return Err(RegistryError::Orphan(s.iri.clone()));
            }
        }
        let mut defaults: BTreeMap<(MappingLevel, &Iri, &Iri), &Iri> = BTreeMap::new();
        for m in self.mappings.values() {
            for end in [&m.source, &m.target] {
                let (what, known) = match m.level {
                    MappingLevel::Logic => ("logic", self.logics.contains_key(end)),
                    MappingLevel::Language => ("language", self.languages.contains_key(end)),
                };
                if !known {
                    return Err(dangling(&m.iri, what, end));
                }
            }
            if m.default && m.kind == MappingKind::Translation {
                if let Some(first) = defaults.insert((m.level, &m.source, &m.target), &m.iri) {
                    return Err(RegistryError::TwoDefaults {
                        source_iri: m.source.clone(),
                        target: m.target.clone(),
                        first: first.clone(),
                        second: m.iri.clone(),
                    });
                }
            }
        }
        for m in self.mappings.values() {
            if let Some(adj) = &m.adjoint_of {
                let t = self.mappings.get(adj).ok_or_else(|| dangling(&m.iri, "mapping", adj))?;
                if m.kind != MappingKind::Projection
                    || t.kind != MappingKind::Translation
                    || t.source != m.target
                    || t.target != m.source
                {
                    return Err(RegistryError::BadAdjoint(m.iri.clone()));
                }
            }
            if let Some(b) = &m.backed_by {
                let backing = self.mappings.get(b).ok_or_else(|| dangling(&m.iri, "mapping", b))?;
                let logic_of = |l: &Iri| self.languages.get(l).and_then(|l| l.logic.clone());
                let ok = m.level == MappingLevel::Language
                    && backing.level == MappingLevel::Logic
                    && backing.kind == m.kind
                    && logic_of(&m.source).as_ref() == Some(&backing.source)
                    && logic_of(&m.target).as_ref() == Some(&backing.target);
                if !ok {
                    return Err(RegistryError::BadBacking(m.iri.clone()));
                }
            }
        }
        Ok(())
    }

    /// Completes a partial declaration.
    pub fn infer_triple(
        &self,
        language: Option<&Iri>,
        logic: Option<&Iri>,
        serialization: Option<&Iri>,
    ) -> Result<Triple, InferenceError> {
        if language.is_none() && logic.is_none() && serialization.is_none() {
            return Err(InferenceError::Empty);
        }
        if let Some(l) = language {
            let desc = self.languages.get(l).ok_or_else(|| InferenceError::Unknown(l.clone()))?;
            if desc.logic.is_none() {
                return Err(InferenceError::LogicUnknown(l.clone()));
            }
        }
        if let Some(l) = logic {
            if !self.logics.contains_key(l) {
                return Err(InferenceError::Unknown(l.clone()));
            }
        }
        if let Some(s) = serialization {
            if !self.serializations.contains_key(s) {
                return Err(InferenceError::Unknown(s.clone()));
            }
        }
        let candidates = self.candidates(language, logic, serialization);
        match candidates.len() {
            0 => {
                // A serialization that only logic-unknown languages support.
                if let (None, None, Some(s)) = (language, logic, serialization) {
                    if let Some(l) = self.languages.values().find(|l| l.serializations.contains(s) && l.logic.is_none()) {
                        return Err(InferenceError::LogicUnknown(l.iri.clone()));
                    }
                }
                Err(InferenceError::Inconsistent)
            }
            1 => Ok(candidates.into_iter().next().unwrap()),
            _ => Err(InferenceError::Ambiguous { candidates }),
        }
    }

    fn candidates(&self, language: Option<&Iri>, logic: Option<&Iri>, serialization: Option<&Iri>) -> Vec<Triple> {
        let mut out = Vec::new();
        for l in self.languages.values() {
            let Some(lg) = &l.logic else { continue };
            if language.is_some_and(|x| x != &l.iri) || logic.is_some_and(|x| x != lg) {
                continue;
            }
            for s in &l.serializations {
                if serialization.is_some_and(|x| x != s) {
                    continue;
                }
                out.push(Triple { language: l.iri.clone(), logic: lg.clone(), serialization: s.clone() });
            }
        }
        out
    }

    fn default_edges(&self) -> impl Iterator<Item = &MappingDesc> {
        self.mappings
            .values()
            .filter(|m| m.default && m.kind == MappingKind::Translation && m.level == MappingLevel::Logic)
    }

    /// The default translation from `source` to `target`: the direct default
    /// edge if there is one, else the unique shortest path over default
    /// edges. Identity is the empty path.
    pub fn default_translation(&self, source: &Iri, target: &Iri) -> Result<Vec<&MappingDesc>, PathError> {
        for l in [source, target] {
            if !self.logics.contains_key(l) {
                return Err(PathError::UnknownLogic(l.clone()));
            }
        }
        if source == target {
            return Ok(Vec::new());
        }
        // Breadth-first layering with all shortest predecessors kept, so the
        // number of shortest paths can be told apart from one.
        let mut dist: BTreeMap<&Iri, usize> = BTreeMap::from([(source, 0)]);
        let mut preds: BTreeMap<&Iri, Vec<&MappingDesc>> = BTreeMap::new();
        let mut queue = VecDeque::from([source]);
        while let Some(n) = queue.pop_front() {
            let d = dist[n];
            for e in self.default_edges().filter(|e| &e.source == n) {
                match dist.get(&e.target) {
                    None => {
                        dist.insert(&e.target, d + 1);
                        preds.entry(&e.target).or_default().push(e);
                        queue.push_back(&e.target);
                    }
                    Some(&dt) if dt == d + 1 => preds.entry(&e.target).or_default().push(e),
                    _ => {}
                }
            }
        }
        if !dist.contains_key(target) {
            return Err(PathError::NoPath { source_iri: source.clone(), target: target.clone() });
        }
        let mut paths: Vec<Vec<&MappingDesc>> = Vec::new();
        let mut stack: Vec<(&Iri, Vec<&MappingDesc>)> = vec![(target, Vec::new())];
        while let Some((node, suffix)) = stack.pop() {
            if node == source {
                let mut p = suffix.clone();
                p.reverse();
                paths.push(p);
                if paths.len() > 8 {
                    break;
                }
                continue;
            }
            for e in preds.get(node).into_iter().flatten() {
                let mut s = suffix.clone();
                s.push(e);
                stack.push((&e.source, s));
            }
        }
        if paths.len() == 1 {
            Ok(paths.pop().unwrap())
        } else {
            Err(PathError::Ambiguous {
                source_iri: source.clone(),
                target: target.clone(),
                paths: paths.iter().map(|p| p.iter().map(|m| m.iri.clone()).collect()).collect(),
            })
        }
    }

    /// The logic-level mapping an IRI stands for: itself, or the mapping a
    /// language-level mapping is backed by.
    pub fn resolve_mapping_iri(&self, iri: &Iri) -> Result<&MappingDesc, MappingLookupError> {
        let m = self.mappings.get(iri).ok_or_else(|| MappingLookupError::Unknown(iri.clone()))?;
        match (m.level, &m.backed_by) {
            (MappingLevel::Logic, _) => Ok(m),
            (MappingLevel::Language, Some(b)) => Ok(&self.mappings[b]),
            (MappingLevel::Language, None) => Err(MappingLookupError::Unbacked(iri.clone())),
        }
    }

    /// Logic-level endpoints of a mapping.
    pub fn mapping_logics(&self, m: &MappingDesc) -> Option<(Iri, Iri)> {
        match m.level {
            MappingLevel::Logic => Some((m.source.clone(), m.target.clone())),
            MappingLevel::Language => {
                let logic = |l: &Iri| self.languages.get(l)?.logic.clone();
                Some((logic(&m.source)?, logic(&m.target)?))
            }
        }
    }

    /// The serialization registered for a file extension, if exactly one is.
    pub fn serialization_for_extension(&self, ext: &str) -> Option<&SerializationDesc> {
        let mut hits = self.serializations.values().filter(|s| s.extensions.iter().any(|e| e.eq_ignore_ascii_case(ext)));
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }

    /// All registered file extensions.
    pub fn extensions(&self) -> BTreeSet<&str> {
        self.serializations.values().flat_map(|s| s.extensions.iter().map(String::as_str)).collect()
    }

    /// RDF description of every entry.
    pub fn to_rdf(&self) -> Vec<RdfTriple> {
        let mut out = Vec::new();
        let v = vocab::term;
        let node = |i: &Iri| RdfTerm::Iri(i.clone());
        let typ = known::iri(known::RDF_TYPE);
        let comment = Iri::parse(format!("{}comment", known::RDFS)).expect("rdfs:comment");
        let boolean = Iri::parse(format!("{}boolean", known::XSD)).expect("xsd:boolean");
        let lit_bool = |b: bool| RdfTerm::Literal { lexical: b.to_string(), datatype: Some(boolean.clone()), lang: None };
        for l in self.logics.values() {
            out.push(RdfTriple::new(node(&l.iri), typ.clone(), node(&v(vocab::LOGIC))));
            if !l.description.is_empty() {
                out.push(RdfTriple::new(node(&l.iri), comment.clone(), RdfTerm::literal(&l.description)));
            }
        }
        for l in self.languages.values() {
            out.push(RdfTriple::new(node(&l.iri), typ.clone(), node(&v(vocab::ONTOLOGY_LANGUAGE))));
            if let Some(lg) = &l.logic {
                out.push(RdfTriple::new(node(&l.iri), v(vocab::LOGIC_PROP), node(lg)));
            }
            for s in &l.serializations {
                out.push(RdfTriple::new(node(&l.iri), v(vocab::SUPPORTS_SERIALIZATION), node(s)));
            }
            if let Some(sup) = &l.sublanguage_of {
                out.push(RdfTriple::new(node(&l.iri), v(vocab::SUBLANGUAGE_OF), node(sup)));
            }
            if !l.description.is_empty() {
                out.push(RdfTriple::new(node(&l.iri), comment.clone(), RdfTerm::literal(&l.description)));
            }
        }
        for s in self.serializations.values() {
            out.push(RdfTriple::new(node(&s.iri), typ.clone(), node(&v(vocab::SERIALIZATION))));
            out.push(RdfTriple::new(node(&s.iri), v(vocab::SUPPORTS_IRIS), lit_bool(s.supports_iris)));
            for e in &s.extensions {
                out.push(RdfTriple::new(node(&s.iri), v(vocab::FILE_EXTENSION), RdfTerm::literal(e)));
            }
        }
        for m in self.mappings.values() {
            let kind = match m.kind {
                MappingKind::Translation => vocab::TRANSLATION,
                MappingKind::Projection => vocab::PROJECTION,
            };
            let level = match m.level {
                MappingLevel::Logic => vocab::LOGIC_MAPPING,
                MappingLevel::Language => vocab::LANGUAGE_MAPPING,
            };
            out.push(RdfTriple::new(node(&m.iri), typ.clone(), node(&v(kind))));
            out.push(RdfTriple::new(node(&m.iri), typ.clone(), node(&v(level))));
            out.push(RdfTriple::new(node(&m.iri), v(vocab::MAPPING_SOURCE), node(&m.source)));
            out.push(RdfTriple::new(node(&m.iri), v(vocab::MAPPING_TARGET), node(&m.target)));
            out.push(RdfTriple::new(node(&m.iri), v(vocab::IS_DEFAULT), lit_bool(m.default)));
            if let Some(a) = &m.adjoint_of {
                out.push(RdfTriple::new(node(&m.iri), v(vocab::ADJOINT_OF), node(a)));
            }
            if let Some(b) = &m.backed_by {
                out.push(RdfTriple::new(node(&m.iri), v(vocab::BACKED_BY), node(b)));
            }
        }
        out
    }

    /// Turtle rendering of [`RegistryGraph::to_rdf`].
    pub fn to_turtle(&self) -> String {
        let mut prefixes = known::registry_prefixes();
        prefixes.bind("dol", vocab::NS);
        prefixes.bind("rdfs", known::RDFS);
        prefixes.bind("xsd", known::XSD);
        write_turtle(&self.to_rdf(), &prefixes)
    }

    /// Rebuilds a registry from its RDF description.
    pub fn from_rdf(triples: &[RdfTriple]) -> Result<Self, RegistryError> {
        let bad = |m: String| RegistryError::Rdf(m);
        let typ = known::iri(known::RDF_TYPE);
        let comment = format!("{}comment", known::RDFS);
        let mut subjects: BTreeMap<Iri, Vec<&RdfTriple>> = BTreeMap::new();
        for t in triples {
            let RdfTerm::Iri(s) = &t.subject else { return Err(bad(format!("blank subject in {t}"))) };
            subjects.entry(s.clone()).or_default().push(t);
        }
        let mut file = RegistryFile::default();
        for (s, ts) in subjects {
            let types: BTreeSet<&str> =
                ts.iter().filter(|t| t.predicate == typ).filter_map(|t| t.object.as_iri().map(Iri::as_str)).collect();
            let objs = |p: &str| -> Vec<&RdfTerm> { ts.iter().filter(|t| t.predicate.as_str() == p).map(|t| &t.object).collect() };
            let iri_obj = |p: &str| objs(p).into_iter().find_map(|o| o.as_iri().cloned());
            let lit = |p: &str| {
                objs(p).into_iter().find_map(|o| match o {
                    RdfTerm::Literal { lexical, .. } => Some(lexical.clone()),
                    _ => None,
                })
            };
            let flag = |p: &str| lit(p).as_deref() == Some("true");
            let description = lit(&comment).unwrap_or_default();
            if types.contains(vocab::LOGIC) {
                file.logics.push(LogicDesc { iri: s, description });
            } else if types.contains(vocab::ONTOLOGY_LANGUAGE) {
                file.languages.push(LanguageDesc {
                    iri: s,
                    logic: iri_obj(vocab::LOGIC_PROP),
                    serializations: objs(vocab::SUPPORTS_SERIALIZATION).into_iter().filter_map(|o| o.as_iri().cloned()).collect(),
                    sublanguage_of: iri_obj(vocab::SUBLANGUAGE_OF),
                    description,
                });
            } else if types.contains(vocab::SERIALIZATION) {
                let extensions: BTreeSet<String> = objs(vocab::FILE_EXTENSION)
                    .into_iter()
                    .filter_map(|o| match o {
                        RdfTerm::Literal { lexical, .. } => Some(lexical.clone()),
                        _ => None,
                    })
                    .collect();
                file.serializations.push(SerializationDesc { iri: s, supports_iris: flag(vocab::SUPPORTS_IRIS), extensions });
            } else if types.contains(vocab::TRANSLATION) || types.contains(vocab::PROJECTION) {
                let kind = if types.contains(vocab::TRANSLATION) { MappingKind::Translation } else { MappingKind::Projection };
                let level = if types.contains(vocab::LANGUAGE_MAPPING) { MappingLevel::Language } else { MappingLevel::Logic };
                let need = |p: &str| iri_obj(p).ok_or_else(|| bad(format!("<{s}> lacks <{p}>")));
                file.mappings.push(MappingDesc {
                    iri: s.clone(),
                    kind,
                    level,
                    source: need(vocab::MAPPING_SOURCE)?,
                    target: need(vocab::MAPPING_TARGET)?,
                    default: flag(vocab::IS_DEFAULT),
                    adjoint_of: iri_obj(vocab::ADJOINT_OF),
                    backed_by: iri_obj(vocab::BACKED_BY),
                });
            } else {
                return Err(bad(format!("<{s}> has no registry type")));
            }
        }
        RegistryGraph::from_file(file)
    }

    /// Prefixes for printing registry IRIs.
    pub fn prefixes() -> PrefixMap {
        known::registry_prefixes()
    }
}

/// Parses and validates a registry JSON document. An empty document
/// (only whitespace) is the empty registry.
pub fn load_registry(json: &str) -> Result<RegistryGraph, RegistryError> {
    if json.trim().is_empty() {
        return Ok(RegistryGraph::empty());
    }
    let file: RegistryFile = serde_json::from_str(json).map_err(|e| RegistryError::Json(e.to_string()))?;
    RegistryGraph::from_file(file)
}
