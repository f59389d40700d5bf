//! Language adapters: extract signatures and abstract sentences from
//! embedded basic-ontology text.
//!
//! Adapters are registered under a (logic IRI, serialization IRI) key, so a
//! new ontology language plugs in by implementing [`Adapter`] and calling
//! [`AdapterRegistry::register`].

pub mod clif;
pub mod manchester;
pub mod prop;
pub mod turtle;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use thiserror::Error;

use crate::iri::{compact, Compacted, Iri, PrefixMap};
use crate::known;
use crate::model::{BasicOntologyBlock, SignatureAndSentences};

/// Syntax error inside a block. The span is relative to the block text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct AdapterError {
    pub message: String,
    pub span: Range<usize>,
}

impl AdapterError {
    pub fn new(message: impl Into<String>, span: Range<usize>) -> Self {
        AdapterError { message: message.into(), span }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no adapter registered for logic <{logic}> with serialization <{serialization}>")]
    Unregistered { logic: Iri, serialization: Iri },
    #[error("block has no complete logic/serialization declaration")]
    Incomplete,
    #[error(transparent)]
    Syntax(#[from] AdapterError),
}

pub trait Adapter: Send + Sync {
    fn logic(&self) -> Iri;
    fn serialization(&self) -> Iri;
    /// Extracts `text`; names expand against `prefixes`.
    fn extract(&self, text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError>;
}

#[derive(Clone, Default)]
pub struct AdapterRegistry {
    table: BTreeMap<(Iri, Iri), Arc<dyn Adapter>>,
}

impl fmt::Debug for AdapterRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.table.keys()).finish()
    }
}

impl AdapterRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Propositional (Hets), SROIQ (Manchester), Common Logic (CLIF) and
    /// RDF (Turtle).
    pub fn builtin() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(prop::PropAdapter));
        r.register(Arc::new(manchester::ManchesterAdapter));
        r.register(Arc::new(clif::ClifAdapter));
        r.register(Arc::new(turtle::TurtleAdapter::default()));
        r
    }

    /// Registers an adapter, replacing any previous one for the same key.
    pub fn register(&mut self, adapter: Arc<dyn Adapter>) {
        self.table.insert((adapter.logic(), adapter.serialization()), adapter);
    }

    pub fn get(&self, logic: &Iri, serialization: &Iri) -> Option<&dyn Adapter> {
        self.table.get(&(logic.clone(), serialization.clone())).map(|a| a.as_ref())
    }

    pub fn keys(&self) -> impl Iterator<Item = &(Iri, Iri)> {
        self.table.keys()
    }

    pub fn extract_text(
        &self,
        logic: &Iri,
        serialization: &Iri,
        text: &str,
        prefixes: &PrefixMap,
    ) -> Result<SignatureAndSentences, ExtractError> {
        let adapter = self.get(logic, serialization).ok_or_else(|| ExtractError::Unregistered {
            logic: logic.clone(),
            serialization: serialization.clone(),
        })?;
        Ok(adapter.extract(text, prefixes)?)
    }

    /// Extracts a block whose declaration has been completed.
    pub fn extract(&self, block: &BasicOntologyBlock, prefixes: &PrefixMap) -> Result<SignatureAndSentences, ExtractError> {
        let (Some(logic), Some(ser)) = (&block.decl.logic, &block.decl.serialization) else {
            return Err(ExtractError::Incomplete);
        };
        self.extract_text(logic, ser, &block.text, prefixes)
    }
}

/// Shortest readable spelling of `iri` for printing in a source language:
/// a bare name for the empty prefix, a CURIE, or `<iri>`.
pub(crate) fn display_name(iri: &Iri, prefixes: &PrefixMap, reserved: impl Fn(&str) -> bool) -> String {
    let plain = |s: &str| {
        let mut cs = s.chars();
        cs.next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-'))
    };
    match compact(iri, prefixes) {
        Compacted::Curie(c) if c.prefix.as_deref() == Some("") && plain(&c.reference) && !reserved(&c.reference) => {
            c.reference
        }
        Compacted::Curie(c) if !c.reference.is_empty() && c.reference.chars().all(|ch| !matches!(ch, '(' | ')' | ',' | '.')) => {
            c.to_string()
        }
        _ => format!("<{iri}>"),
    }
}

/// Identifier-like token characters shared by the block lexers. A `.` only
/// belongs to a name when another name character follows it.
pub(crate) fn name_end(text: &str, start: usize, extra: impl Fn(char) -> bool) -> usize {
    let mut end = start;
    let mut chars = text[start..].char_indices().peekable();
    while let Some((off, c)) = chars.next() {
        let ok = c.is_alphanumeric() || matches!(c, '_' | ':' | '/' | '#') || extra(c);
        if ok {
            end = start + off + c.len_utf8();
        } else if c == '.' {
            match chars.peek() {
                Some((_, n)) if n.is_alphanumeric() || *n == '_' => end = start + off + 1,
                _ => break,
            }
        } else {
            break;
        }
    }
    end
}

/// Resolves a name token and maps failures to a block-relative error.
pub(crate) fn resolve_name(name: &str, prefixes: &PrefixMap, span: Range<usize>) -> Result<Iri, AdapterError> {
    prefixes.resolve(name).map_err(|e| AdapterError::new(e.to_string(), span))
}

pub(crate) fn is_owl_thing(iri: &Iri) -> bool {
    iri.as_str() == known::OWL_THING
}

pub(crate) fn is_owl_nothing(iri: &Iri) -> bool {
    iri.as_str() == known::OWL_NOTHING
}
