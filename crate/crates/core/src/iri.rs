//! IRIs, CURIEs and prefix environments.
//!
//! Every identifier in a distributed ontology is an absolute IRI. Sources
//! abbreviate them as CURIEs (`owl:Nothing`), bare names (`Mereology`, which
//! expand against the empty prefix) or angle-bracketed IRIs. Validation is
//! purely syntactic.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IriError {
    #[error("`{0}` is not an absolute IRI")]
    NotAbsolute(String),
    #[error("unknown prefix `{0}:`")]
    UnknownPrefix(String),
    #[error("`{0}` is not a valid CURIE")]
    InvalidCurie(String),
    #[error("unresolved name `{0}`: no empty-prefix binding in scope")]
    UnresolvedName(String),
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn parse(s: impl Into<String>) -> Result<Self, IriError> {
        let s = s.into();
        if is_absolute_iri(&s) {
            Ok(Iri(s))
        } else {
            Err(IriError::NotAbsolute(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The text after the last `#` or `/`, used for display and file lookup.
    pub fn local_name(&self) -> &str {
        let trimmed = self.0.trim_end_matches(['#', '/']);
        match trimmed.rfind(['#', '/']) {
            Some(i) => &trimmed[i + 1..],
            None => trimmed.split_once(':').map_or(trimmed, |(_, r)| r),
        }
    }

    /// Appends a suffix, re-validating the result.
    pub fn join(&self, suffix: &str) -> Result<Iri, IriError> {
        Iri::parse(format!("{}{}", self.0, suffix))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = IriError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::parse(value)
    }
}

impl From<Iri> for String {
    fn from(value: Iri) -> Self {
        value.0
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn is_absolute_iri(s: &str) -> bool {
    let Some((scheme, rest)) = s.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !rest.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`'))
}

/// `true` for NCName-like prefix labels: a letter or `_`, then letters,
/// digits, `-`, `_` or `.`.
pub fn is_prefix_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_alphabetic() || c == '_' => {
            chars.all(|c| c.is_alphanumeric() || matches!(c, '-' | '_' | '.'))
        }
        Some(_) => false,
    }
}

/// `true` if `s` can stand after the colon of a CURIE in DOL Text.
pub fn is_curie_reference(s: &str) -> bool {
    !s.chars().any(|c| {
        c.is_whitespace()
            || c.is_control()
            || matches!(c, '<' | '>' | '"' | '{' | '}' | '(' | ')' | '[' | ']' | ',' | '|' | '\\' | '^' | '`' | '\'')
    }) && !s.ends_with('.')
        && !s.contains('↦')
}

/// Ordered prefix bindings. The empty label is the default namespace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    bindings: IndexMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `label`, replacing any earlier binding for it. Returns the old
    /// namespace.
    pub fn bind(&mut self, label: impl Into<String>, namespace: impl Into<String>) -> Option<String> {
        self.bindings.insert(label.into(), namespace.into())
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.bindings.get(label).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// A nested scope: bindings of `inner` shadow those of `self`.
    pub fn overlay(&self, inner: &PrefixMap) -> PrefixMap {
        let mut out = self.clone();
        for (k, v) in inner.iter() {
            out.bind(k, v);
        }
        out
    }

    /// Expands a name as written in a source: `<abs>`, `[safe:curie]`,
    /// `pfx:ref`, or a bare name.
    pub fn resolve(&self, name: &str) -> Result<Iri, IriError> {
        if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
            return Iri::parse(inner);
        }
        expand(&Curie::parse(name)?, self)
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for PrefixMap {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut m = PrefixMap::new();
        for (k, v) in iter {
            m.bind(k, v);
        }
        m
    }
}

/// A compact URI expression. `prefix == None` is a bare name, which expands
/// against the empty prefix just like `:name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curie {
    pub prefix: Option<String>,
    pub reference: String,
}

impl Curie {
    pub fn new(prefix: Option<&str>, reference: impl Into<String>) -> Self {
        Curie { prefix: prefix.map(str::to_owned), reference: reference.into() }
    }

    /// Parses `pfx:ref`, `:ref`, `ref` or the safe form `[pfx:ref]`.
    pub fn parse(s: &str) -> Result<Self, IriError> {
        let body = match s.strip_prefix('[') {
            Some(inner) => inner.strip_suffix(']').ok_or_else(|| IriError::InvalidCurie(s.to_owned()))?,
            None => s,
        };
        let (prefix, reference) = match body.split_once(':') {
            Some((p, r)) if is_prefix_label(p) => (Some(p), r),
            Some(_) => return Err(IriError::InvalidCurie(s.to_owned())),
            None => (None, body),
        };
        if (prefix.is_none() && reference.is_empty()) || reference.chars().any(char::is_whitespace) {
            return Err(IriError::InvalidCurie(s.to_owned()));
        }
        Ok(Curie::new(prefix, reference))
    }

    fn label(&self) -> &str {
        self.prefix.as_deref().unwrap_or("")
    }
}

impl fmt::Display for Curie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.prefix {
            Some(p) => write!(f, "{p}:{}", self.reference),
            None => f.write_str(&self.reference),
        }
    }
}

/// Concatenates the bound namespace and the reference.
pub fn expand(curie: &Curie, prefixes: &PrefixMap) -> Result<Iri, IriError> {
    let ns = prefixes.get(curie.label()).ok_or_else(|| match &curie.prefix {
        Some(p) if !p.is_empty() => IriError::UnknownPrefix(p.clone()),
        _ => IriError::UnresolvedName(curie.reference.clone()),
    })?;
    Iri::parse(format!("{ns}{}", curie.reference))
}

/// Result of [`compact`]: a CURIE when some namespace matches, otherwise the
/// IRI itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compacted {
    Curie(Curie),
    Iri(Iri),
}

impl fmt::Display for Compacted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Compacted::Curie(c) => write!(f, "{c}"),
            Compacted::Iri(i) => write!(f, "<{i}>"),
        }
    }
}

/// Longest-namespace compaction. Ties between labels bound to the same
/// namespace go to the lexicographically smallest label. The empty prefix
/// yields a `:ref` CURIE (explicit empty label).
pub fn compact(iri: &Iri, prefixes: &PrefixMap) -> Compacted {
    compact_with(iri, prefixes, is_curie_reference)
}

/// [`compact`] with a caller-supplied reference validity test (serializers
/// with stricter local-name rules use this).
pub fn compact_with(iri: &Iri, prefixes: &PrefixMap, valid_reference: impl Fn(&str) -> bool) -> Compacted {
    let mut best: Option<(&str, &str)> = None;
    for (label, ns) in prefixes.iter() {
        let Some(reference) = iri.as_str().strip_prefix(ns) else { continue };
        if ns.is_empty() || !valid_reference(reference) {
            continue;
        }
        best = match best {
            Some((bl, bns)) if bns.len() > ns.len() || (bns.len() == ns.len() && bl <= label) => Some((bl, bns)),
            _ => Some((label, ns)),
        };
    }
    match best {
        Some((label, ns)) => Compacted::Curie(Curie::new(Some(label), &iri.as_str()[ns.len()..])),
        None => Compacted::Iri(iri.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn listing1_prefixes() -> PrefixMap {
        [
            ("", "http://www.example.org/mereology#"),
            ("owl", "http://www.w3.org/2002/07/owl#"),
            ("log", "http://purl.net/dol/logics/"),
            ("trans", "http://purl.net/dol/translations/"),
            ("ser", "http://purl.net/dol/serializations/"),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn expands_listing_prefixes() {
        let p = listing1_prefixes();
        assert_eq!(
            expand(&Curie::new(Some("owl"), "Nothing"), &p).unwrap().as_str(),
            "http://www.w3.org/2002/07/owl#Nothing"
        );
        assert_eq!(
            expand(&Curie::new(Some("trans"), "PropositionalToSROIQ"), &p).unwrap().as_str(),
            "http://purl.net/dol/translations/PropositionalToSROIQ"
        );
        assert_eq!(p.resolve("Mereology").unwrap().as_str(), "http://www.example.org/mereology#Mereology");
        assert_eq!(p.resolve(":Mereology").unwrap().as_str(), "http://www.example.org/mereology#Mereology");
        assert_eq!(p.resolve("[owl:Thing]").unwrap().as_str(), "http://www.w3.org/2002/07/owl#Thing");
    }

    #[test]
    fn unknown_prefix_is_an_error() {
        assert_eq!(
            expand(&Curie::new(Some("zzz"), "x"), &PrefixMap::new()),
            Err(IriError::UnknownPrefix("zzz".into()))
        );
        assert_eq!(PrefixMap::new().resolve("x"), Err(IriError::UnresolvedName("x".into())));
    }

    #[test]
    fn curie_reference_may_contain_colons() {
        let c = Curie::parse("tags:has_k_fuel:electricity").unwrap();
        assert_eq!(c.prefix.as_deref(), Some("tags"));
        assert_eq!(c.reference, "has_k_fuel:electricity");
    }

    #[test]
    fn empty_reference_is_the_namespace() {
        let p: PrefixMap = [("activ", "https://example.org/activities.owl#")].into_iter().collect();
        assert_eq!(p.resolve("activ:").unwrap().as_str(), "https://example.org/activities.owl#");
    }

    #[test]
    fn compact_examples() {
        let p = listing1_prefixes();
        let sroiq = Iri::parse("http://purl.net/dol/logics/SROIQ").unwrap();
        assert_eq!(compact(&sroiq, &p), Compacted::Curie(Curie::new(Some("log"), "SROIQ")));
        let other = Iri::parse("urn:x:y").unwrap();
        assert_eq!(compact(&other, &p), Compacted::Iri(other.clone()));
        assert_eq!(compact(&other, &p).to_string(), "<urn:x:y>");
    }

    #[test]
    fn absolute_iri_passes_through() {
        assert_eq!(PrefixMap::new().resolve("<http://a.example/x>").unwrap().as_str(), "http://a.example/x");
        assert!(Iri::parse("no-scheme").is_err());
        assert!(Iri::parse("http://a b").is_err());
    }

    #[test]
    fn local_names() {
        assert_eq!(Iri::parse("http://x.org/a/pizza.owl#").unwrap().local_name(), "pizza.owl");
        assert_eq!(Iri::parse("http://x.org/a#B").unwrap().local_name(), "B");
        assert_eq!(Iri::parse("http://productdb.org/ean/").unwrap().local_name(), "ean");
    }

    fn prefix_table() -> impl Strategy<Value = (PrefixMap, Vec<String>)> {
        let ns = prop::sample::select(vec![
            "http://a.org/",
            "http://a.org/x/",
            "http://a.org/x/y#",
            "http://b.org/",
            "http://a.org/x",
        ]);
        (prop::collection::vec(("[a-e]{1,2}", ns), 0..6), prop::collection::vec("[a-z/#]{0,6}", 1..4)).prop_map(
            |(binds, suffixes)| {
                let map: PrefixMap = binds.into_iter().map(|(l, n)| (l, n.to_string())).collect();
                (map, suffixes)
            },
        )
    }

    proptest! {
        #[test]
        fn compaction_round_trips_and_picks_longest((map, suffixes) in prefix_table()) {
            for base in ["http://a.org/", "http://a.org/x/y#", "http://b.org/", "http://c.org/"] {
                for suffix in &suffixes {
                    let iri = Iri::parse(format!("{base}{suffix}")).unwrap();
                    let c = compact(&iri, &map);
                    match &c {
                        Compacted::Curie(curie) => prop_assert_eq!(expand(curie, &map).unwrap(), iri.clone()),
                        Compacted::Iri(i) => prop_assert_eq!(i, &iri),
                    }
                    // brute force: every usable binding, keep the longest namespace
                    let longest = map
                        .iter()
                        .filter(|(_, ns)| iri.as_str().starts_with(ns) && is_curie_reference(&iri.as_str()[ns.len()..]))
                        .map(|(_, ns)| ns.len())
                        .max();
                    match (longest, &c) {
                        (None, Compacted::Iri(_)) => {}
                        (Some(len), Compacted::Curie(curie)) => {
                            prop_assert_eq!(map.get(curie.prefix.as_deref().unwrap()).unwrap().len(), len)
                        }
                        (l, c) => prop_assert!(false, "longest={:?} compacted={:?}", l, c),
                    }
                }
            }
        }
    }
}
