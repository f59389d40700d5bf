//! OWL 2 Manchester syntax, restricted to the constructs ontologies in this
//! toolchain use: `Class:` frames with `SubClassOf:`, `EquivalentTo:` and
//! `DisjointUnionOf:`; `ObjectProperty:` frames with `Characteristics:`
//! (`Transitive`, `Asymmetric`) and `SubPropertyOf:`; `Individual:` frames
//! with `Types:` and `Facts:`; plus `Prefix:`, `Ontology:` and `Import:`.
//!
//! Class expressions accept both Manchester keywords and description-logic
//! glyphs: `R some C` / `∃ R . C`, `R only C` / `∀ R . C`, `and` / `⊓`,
//! `or` / `⊔`, `not` / `¬`, `owl:Thing` / `⊤`, `owl:Nothing` / `⊥`, and
//! `R exactly n [C]`. Anything else is rejected as unsupported.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use super::{display_name, is_owl_nothing, is_owl_thing, name_end, resolve_name, Adapter, AdapterError};
use crate::iri::{Iri, PrefixMap};
use crate::known;
use crate::model::{Entity, EntityKind, SentenceForm, SignatureAndSentences};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyExpr {
    Named(Iri),
    Inverse(Iri),
}

impl PropertyExpr {
    pub fn name(&self) -> &Iri {
        match self {
            PropertyExpr::Named(p) | PropertyExpr::Inverse(p) => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpr {
    Thing,
    Nothing,
    Class(Iri),
    And(Vec<ClassExpr>),
    Or(Vec<ClassExpr>),
    Not(Box<ClassExpr>),
    Some(PropertyExpr, Box<ClassExpr>),
    Only(PropertyExpr, Box<ClassExpr>),
    Exactly(u32, PropertyExpr, Option<Box<ClassExpr>>),
}

impl ClassExpr {
    pub fn class(iri: Iri) -> Self {
        ClassExpr::Class(iri)
    }

    pub fn not(c: ClassExpr) -> Self {
        ClassExpr::Not(Box::new(c))
    }

    pub fn some(p: PropertyExpr, c: ClassExpr) -> Self {
        ClassExpr::Some(p, Box::new(c))
    }

    pub fn only(p: PropertyExpr, c: ClassExpr) -> Self {
        ClassExpr::Only(p, Box::new(c))
    }

    /// Only named classes, `⊤`, `⊥` and boolean connectives.
    pub fn is_boolean(&self) -> bool {
        match self {
            ClassExpr::Thing | ClassExpr::Nothing | ClassExpr::Class(_) => true,
            ClassExpr::And(xs) | ClassExpr::Or(xs) => xs.iter().all(ClassExpr::is_boolean),
            ClassExpr::Not(x) => x.is_boolean(),
            _ => false,
        }
    }

    pub fn class_names(&self, out: &mut BTreeSet<Iri>) {
        match self {
            ClassExpr::Class(c) => {
                out.insert(c.clone());
            }
            ClassExpr::And(xs) | ClassExpr::Or(xs) => xs.iter().for_each(|x| x.class_names(out)),
            ClassExpr::Not(x) | ClassExpr::Some(_, x) | ClassExpr::Only(_, x) => x.class_names(out),
            ClassExpr::Exactly(_, _, Some(x)) => x.class_names(out),
            _ => {}
        }
    }

    pub fn property_names(&self, out: &mut BTreeSet<Iri>) {
        match self {
            ClassExpr::And(xs) | ClassExpr::Or(xs) => xs.iter().for_each(|x| x.property_names(out)),
            ClassExpr::Not(x) => x.property_names(out),
            ClassExpr::Some(p, x) | ClassExpr::Only(p, x) => {
                out.insert(p.name().clone());
                x.property_names(out);
            }
            ClassExpr::Exactly(_, p, x) => {
                out.insert(p.name().clone());
                if let Some(x) = x {
                    x.property_names(out);
                }
            }
            _ => {}
        }
    }

    pub fn map_names(&self, f: &impl Fn(&Iri) -> Iri) -> ClassExpr {
        let prop = |p: &PropertyExpr| match p {
            PropertyExpr::Named(n) => PropertyExpr::Named(f(n)),
            PropertyExpr::Inverse(n) => PropertyExpr::Inverse(f(n)),
        };
        match self {
            ClassExpr::Thing => ClassExpr::Thing,
            ClassExpr::Nothing => ClassExpr::Nothing,
            ClassExpr::Class(c) => ClassExpr::Class(f(c)),
            ClassExpr::And(xs) => ClassExpr::And(xs.iter().map(|x| x.map_names(f)).collect()),
            ClassExpr::Or(xs) => ClassExpr::Or(xs.iter().map(|x| x.map_names(f)).collect()),
            ClassExpr::Not(x) => ClassExpr::not(x.map_names(f)),
            ClassExpr::Some(p, x) => ClassExpr::some(prop(p), x.map_names(f)),
            ClassExpr::Only(p, x) => ClassExpr::only(prop(p), x.map_names(f)),
            ClassExpr::Exactly(n, p, x) => ClassExpr::Exactly(*n, prop(p), x.as_ref().map(|x| Box::new(x.map_names(f)))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ClassExpr::Or(_) => 1,
            ClassExpr::And(_) => 2,
            ClassExpr::Not(_) => 3,
            ClassExpr::Some(..) | ClassExpr::Only(..) | ClassExpr::Exactly(..) => 4,
            _ => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Characteristic {
    Transitive,
    Asymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Individual {
    Named(Iri),
    /// Anonymous individual with a document-scoped label (`_:b0`).
    Anonymous(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManchesterAxiom {
    SubClassOf(ClassExpr, ClassExpr),
    EquivalentTo(Iri, ClassExpr),
    DisjointUnionOf(Iri, Vec<ClassExpr>),
    Characteristic(Iri, Characteristic),
    SubPropertyOf(Iri, Iri),
    Types(Individual, ClassExpr),
    Fact(Individual, Iri, Individual),
}

impl ManchesterAxiom {
    /// Class axioms whose expressions are all boolean: the fragment decided
    /// by truth tables.
    pub fn is_taxonomic(&self) -> bool {
        match self {
            ManchesterAxiom::SubClassOf(a, b) => a.is_boolean() && b.is_boolean(),
            ManchesterAxiom::EquivalentTo(_, b) => b.is_boolean(),
            ManchesterAxiom::DisjointUnionOf(_, xs) => xs.iter().all(ClassExpr::is_boolean),
            _ => false,
        }
    }

    /// `true` if no object property occurs.
    pub fn is_role_free(&self) -> bool {
        let mut props = BTreeSet::new();
        match self {
            ManchesterAxiom::SubClassOf(a, b) => {
                a.property_names(&mut props);
                b.property_names(&mut props);
            }
            ManchesterAxiom::EquivalentTo(_, b) | ManchesterAxiom::Types(_, b) => b.property_names(&mut props),
            ManchesterAxiom::DisjointUnionOf(_, xs) => xs.iter().for_each(|x| x.property_names(&mut props)),
            ManchesterAxiom::Characteristic(..) | ManchesterAxiom::SubPropertyOf(..) | ManchesterAxiom::Fact(..) => {
                return false
            }
        }
        props.is_empty()
    }

    pub fn class_names(&self) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        match self {
            ManchesterAxiom::SubClassOf(a, b) => {
                a.class_names(&mut out);
                b.class_names(&mut out);
            }
            ManchesterAxiom::EquivalentTo(c, b) => {
                out.insert(c.clone());
                b.class_names(&mut out);
            }
            ManchesterAxiom::DisjointUnionOf(c, xs) => {
                out.insert(c.clone());
                xs.iter().for_each(|x| x.class_names(&mut out));
            }
            ManchesterAxiom::Types(_, b) => b.class_names(&mut out),
            _ => {}
        }
        out
    }

    pub fn map_names(&self, f: &impl Fn(&Iri) -> Iri) -> ManchesterAxiom {
        let ind = |i: &Individual| match i {
            Individual::Named(n) => Individual::Named(f(n)),
            Individual::Anonymous(a) => Individual::Anonymous(a.clone()),
        };
        match self {
            ManchesterAxiom::SubClassOf(a, b) => ManchesterAxiom::SubClassOf(a.map_names(f), b.map_names(f)),
            ManchesterAxiom::EquivalentTo(c, b) => ManchesterAxiom::EquivalentTo(f(c), b.map_names(f)),
            ManchesterAxiom::DisjointUnionOf(c, xs) => {
                ManchesterAxiom::DisjointUnionOf(f(c), xs.iter().map(|x| x.map_names(f)).collect())
            }
            ManchesterAxiom::Characteristic(p, c) => ManchesterAxiom::Characteristic(f(p), *c),
            ManchesterAxiom::SubPropertyOf(p, q) => ManchesterAxiom::SubPropertyOf(f(p), f(q)),
            ManchesterAxiom::Types(i, c) => ManchesterAxiom::Types(ind(i), c.map_names(f)),
            ManchesterAxiom::Fact(a, p, b) => ManchesterAxiom::Fact(ind(a), f(p), ind(b)),
        }
    }

    /// Short construct name used in error reports.
    pub fn construct(&self) -> &'static str {
        match self {
            ManchesterAxiom::SubClassOf(..) => "SubClassOf",
            ManchesterAxiom::EquivalentTo(..) => "EquivalentTo",
            ManchesterAxiom::DisjointUnionOf(..) => "DisjointUnionOf",
            ManchesterAxiom::Characteristic(..) => "Characteristics",
            ManchesterAxiom::SubPropertyOf(..) => "SubPropertyOf",
            ManchesterAxiom::Types(..) => "Types",
            ManchesterAxiom::Fact(..) => "Facts",
        }
    }
}

/// Prints class expressions and axioms. With `local_names` the output is for
/// people; otherwise names are compacted against `prefixes` and the class
/// expression output re-parses to an equal tree.
pub struct ManchesterPrinter<'a> {
    pub prefixes: &'a PrefixMap,
    pub local_names: bool,
}

impl ManchesterPrinter<'_> {
    pub fn name(&self, iri: &Iri) -> String {
        if self.local_names {
            iri.local_name().to_owned()
        } else {
            display_name(iri, self.prefixes, is_reserved)
        }
    }

    fn property(&self, p: &PropertyExpr) -> String {
        match p {
            PropertyExpr::Named(n) => self.name(n),
            PropertyExpr::Inverse(n) => format!("inverse {}", self.name(n)),
        }
    }

    pub fn individual(&self, i: &Individual) -> String {
        match i {
            Individual::Named(n) => self.name(n),
            Individual::Anonymous(a) => format!("_:{a}"),
        }
    }

    pub fn class_expr(&self, c: &ClassExpr) -> String {
        let child = |x: &ClassExpr, min: u8| {
            let s = self.class_expr(x);
            if x.precedence() < min {
                format!("({s})")
            } else {
                s
            }
        };
        match c {
            ClassExpr::Thing => "owl:Thing".to_owned(),
            ClassExpr::Nothing => "owl:Nothing".to_owned(),
            ClassExpr::Class(n) => self.name(n),
            ClassExpr::And(xs) if xs.is_empty() => "owl:Thing".to_owned(),
            ClassExpr::Or(xs) if xs.is_empty() => "owl:Nothing".to_owned(),
            ClassExpr::And(xs) => xs.iter().map(|x| child(x, 3)).collect::<Vec<_>>().join(" and "),
            ClassExpr::Or(xs) => xs.iter().map(|x| child(x, 2)).collect::<Vec<_>>().join(" or "),
            ClassExpr::Not(x) => format!("not {}", child(x, 3)),
            ClassExpr::Some(p, x) => format!("{} some {}", self.property(p), child(x, 3)),
            ClassExpr::Only(p, x) => format!("{} only {}", self.property(p), child(x, 3)),
            ClassExpr::Exactly(n, p, None) => format!("{} exactly {n}", self.property(p)),
            ClassExpr::Exactly(n, p, Some(x)) => format!("{} exactly {n} {}", self.property(p), child(x, 5)),
        }
    }

    /// Functional-style rendering of an axiom.
    pub fn axiom(&self, a: &ManchesterAxiom) -> String {
        match a {
            ManchesterAxiom::SubClassOf(x, y) => format!("SubClassOf({}, {})", self.class_expr(x), self.class_expr(y)),
            ManchesterAxiom::EquivalentTo(c, y) => format!("EquivalentTo({}, {})", self.name(c), self.class_expr(y)),
            ManchesterAxiom::DisjointUnionOf(c, xs) => format!(
                "DisjointUnionOf({}, {})",
                self.name(c),
                xs.iter().map(|x| self.class_expr(x)).collect::<Vec<_>>().join(", ")
            ),
            ManchesterAxiom::Characteristic(p, ch) => format!("{ch:?}({})", self.name(p)),
            ManchesterAxiom::SubPropertyOf(p, q) => format!("SubPropertyOf({}, {})", self.name(p), self.name(q)),
            ManchesterAxiom::Types(i, c) => format!("Types({}, {})", self.individual(i), self.class_expr(c)),
            ManchesterAxiom::Fact(a, p, b) => {
                format!("Fact({}, {}, {})", self.individual(a), self.name(p), self.individual(b))
            }
        }
    }

    /// Manchester frame text for an axiom, when one exists. Subclass axioms
    /// with a complex left-hand side have no frame form.
    pub fn frame(&self, a: &ManchesterAxiom) -> Option<String> {
        Some(match a {
            ManchesterAxiom::SubClassOf(ClassExpr::Class(c), y) => {
                format!("Class: {} SubClassOf: {}", self.name(c), self.class_expr(y))
            }
            ManchesterAxiom::SubClassOf(..) => return None,
            ManchesterAxiom::EquivalentTo(c, y) => format!("Class: {} EquivalentTo: {}", self.name(c), self.class_expr(y)),
            ManchesterAxiom::DisjointUnionOf(c, xs) => format!(
                "Class: {} DisjointUnionOf: {}",
                self.name(c),
                xs.iter().map(|x| self.class_expr(x)).collect::<Vec<_>>().join(", ")
            ),
            ManchesterAxiom::Characteristic(p, ch) => {
                format!("ObjectProperty: {} Characteristics: {ch:?}", self.name(p))
            }
            ManchesterAxiom::SubPropertyOf(p, q) => {
                format!("ObjectProperty: {} SubPropertyOf: {}", self.name(p), self.name(q))
            }
            ManchesterAxiom::Types(i, c) => format!("Individual: {} Types: {}", self.individual(i), self.class_expr(c)),
            ManchesterAxiom::Fact(a, p, b) => {
                format!("Individual: {} Facts: {} {}", self.individual(a), self.name(p), self.individual(b))
            }
        })
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ManchesterPrinter { prefixes: &PrefixMap::new(), local_names: true }.class_expr(self))
    }
}

impl fmt::Display for ManchesterAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ManchesterPrinter { prefixes: &PrefixMap::new(), local_names: true }.axiom(self))
    }
}

const SUPPORTED_KEYWORDS: &[&str] = &[
    "Prefix",
    "Ontology",
    "Import",
    "Class",
    "ObjectProperty",
    "Individual",
    "SubClassOf",
    "EquivalentTo",
    "DisjointUnionOf",
    "Characteristics",
    "SubPropertyOf",
    "Types",
    "Facts",
];

const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "DataProperty",
    "AnnotationProperty",
    "Datatype",
    "Annotations",
    "DisjointWith",
    "DisjointClasses",
    "EquivalentClasses",
    "DisjointProperties",
    "EquivalentProperties",
    "SameIndividual",
    "DifferentIndividuals",
    "Domain",
    "Range",
    "InverseOf",
    "SubPropertyChain",
    "HasKey",
    "SameAs",
    "DifferentFrom",
    "Rule",
];

const UNSUPPORTED_WORDS: &[&str] = &["min", "max", "value", "that", "Self", "Functional", "InverseFunctional"];

fn is_reserved(s: &str) -> bool {
    matches!(s, "some" | "only" | "exactly" | "and" | "or" | "not" | "inverse")
        || UNSUPPORTED_WORDS.contains(&s)
        || SUPPORTED_KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Keyword(String),
    Word(String),
    FullIri(String),
    LParen,
    RParen,
    LBrace,
    Comma,
    Dot,
    Exists,
    Forall,
    Or,
    And,
    Not,
    Top,
    Bottom,
}

fn lex(text: &str) -> Result<Vec<(Tok, Range<usize>)>, AdapterError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("//") {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '∃' => Some(Tok::Exists),
            '∀' => Some(Tok::Forall),
            '⊔' => Some(Tok::Or),
            '⊓' => Some(Tok::And),
            '¬' => Some(Tok::Not),
            '⊤' => Some(Tok::Top),
            '⊥' => Some(Tok::Bottom),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, i..i + c.len_utf8()));
            i += c.len_utf8();
            continue;
        }
        if c == '<' {
            let end = rest.find('>').ok_or_else(|| AdapterError::new("unterminated <IRI>", i..text.len()))?;
            out.push((Tok::FullIri(rest[1..end].to_owned()), i..i + end + 1));
            i += end + 1;
            continue;
        }
        if c.is_alphanumeric() || c == '_' || c == ':' {
            let end = name_end(text, i, |c| c == '-');
            let word = &text[i..end];
            let tok = match word.strip_suffix(':') {
                Some(stem) if SUPPORTED_KEYWORDS.contains(&stem) => Tok::Keyword(stem.to_owned()),
                Some(stem) if UNSUPPORTED_KEYWORDS.contains(&stem) => {
                    return Err(AdapterError::new(format!("unsupported construct `{word}`"), i..end))
                }
                _ => Tok::Word(word.to_owned()),
            };
            out.push((tok, i..end));
            i = end;
            continue;
        }
        return Err(AdapterError::new(format!("unexpected character `{c}`"), i..i + c.len_utf8()));
    }
    Ok(out)
}

/// Names seen while parsing, with the position kind they occurred in.
#[derive(Default)]
struct Mentions {
    classes: Vec<Iri>,
    properties: Vec<Iri>,
    individuals: Vec<Iri>,
}

struct Parser<'a> {
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
    prefixes: PrefixMap,
    end: usize,
    mentions: Mentions,
    _text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn span(&self) -> Range<usize> {
        self.toks.get(self.pos).map_or(self.end..self.end, |t| t.1.clone())
    }

    fn prev_end(&self) -> usize {
        self.pos.checked_sub(1).map_or(0, |p| self.toks[p].1.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AdapterError> {
        Err(AdapterError::new(msg, self.span()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word_is(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn resolve(&self, name: &str, span: Range<usize>) -> Result<Iri, AdapterError> {
        if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
            return Iri::parse(inner).map_err(|e| AdapterError::new(e.to_string(), span));
        }
        resolve_name(name, &self.prefixes, span)
    }

    /// A name token (word or full IRI) that is not a reserved word.
    fn name(&mut self, what: &str) -> Result<Iri, AdapterError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::FullIri(i)) => {
                self.pos += 1;
                Iri::parse(i).map_err(|e| AdapterError::new(e.to_string(), span))
            }
            Some(Tok::Word(w)) if UNSUPPORTED_WORDS.contains(&w.as_str()) => {
                self.err(format!("unsupported construct `{w}`"))
            }
            Some(Tok::Word(w)) if !is_reserved(&w) && !w.starts_with("_:") => {
                self.pos += 1;
                self.resolve(&w, span)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn individual(&mut self) -> Result<Individual, AdapterError> {
        if let Some(Tok::Word(w)) = self.peek() {
            if let Some(label) = w.strip_prefix("_:") {
                let label = label.to_owned();
                self.pos += 1;
                return Ok(Individual::Anonymous(label));
            }
        }
        let n = self.name("an individual")?;
        self.mentions.individuals.push(n.clone());
        Ok(Individual::Named(n))
    }

    fn property(&mut self) -> Result<PropertyExpr, AdapterError> {
        let p = if self.word_is("inverse") {
            self.pos += 1;
            let paren = self.eat(&Tok::LParen);
            let n = self.name("an object property")?;
            if paren && !self.eat(&Tok::RParen) {
                return self.err("expected `)`");
            }
            PropertyExpr::Inverse(n)
        } else {
            PropertyExpr::Named(self.name("an object property")?)
        };
        self.mentions.properties.push(p.name().clone());
        Ok(p)
    }

    fn expr(&mut self) -> Result<ClassExpr, AdapterError> {
        let mut items = vec![self.conj()?];
        while self.word_is("or") || self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            items.push(self.conj()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { ClassExpr::Or(items) })
    }

    fn conj(&mut self) -> Result<ClassExpr, AdapterError> {
        let mut items = vec![self.unary()?];
        while self.word_is("and") || self.peek() == Some(&Tok::And) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { ClassExpr::And(items) })
    }

    fn unary(&mut self) -> Result<ClassExpr, AdapterError> {
        if self.word_is("not") || self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(ClassExpr::not(self.unary()?));
        }
        if let Some(q @ (Tok::Exists | Tok::Forall)) = self.peek().cloned() {
            self.pos += 1;
            let p = self.property()?;
            if !self.eat(&Tok::Dot) {
                return self.err("expected `.` after the restricted property");
            }
            let filler = self.unary()?;
            return Ok(if q == Tok::Exists { ClassExpr::some(p, filler) } else { ClassExpr::only(p, filler) });
        }
        let starts_property = match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Word(w)), _) if w == "inverse" => true,
            (Some(Tok::Word(_) | Tok::FullIri(_)), Some(Tok::Word(next))) => {
                matches!(next.as_str(), "some" | "only" | "exactly" | "min" | "max" | "value")
            }
            _ => false,
        };
        if starts_property {
            let p = self.property()?;
            let Some(Tok::Word(kw)) = self.peek().cloned() else {
                return self.err("expected `some`, `only` or `exactly`");
            };
            self.pos += 1;
            return match kw.as_str() {
                "some" => Ok(ClassExpr::some(p, self.unary()?)),
                "only" => Ok(ClassExpr::only(p, self.unary()?)),
                "exactly" => {
                    let span = self.span();
                    let n = match self.peek() {
                        Some(Tok::Word(w)) => w.parse::<u32>().ok(),
                        _ => None,
                    }
                    .ok_or_else(|| AdapterError::new("expected a cardinality", span))?;
                    self.pos += 1;
                    let starts_filler = match self.peek() {
                        Some(Tok::Word(w)) => w == "not" || w == "inverse" || !is_reserved(w),
                        Some(Tok::FullIri(_) | Tok::LParen | Tok::Not | Tok::Top | Tok::Bottom | Tok::Exists | Tok::Forall) => true,
                        _ => false,
                    };
                    let filler = if starts_filler { Some(Box::new(self.unary()?)) } else { None };
                    Ok(ClassExpr::Exactly(n, p, filler))
                }
                other => {
                    self.pos -= 1;
                    self.err(format!("unsupported construct `{other}`"))
                }
            };
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<ClassExpr, AdapterError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(ClassExpr::Thing)
            }
            Some(Tok::Bottom) => {
                self.pos += 1;
                Ok(ClassExpr::Nothing)
            }
            Some(Tok::LBrace) => self.err("unsupported construct: nominals `{…}`"),
            _ => {
                let n = self.name("a class expression")?;
                Ok(if is_owl_thing(&n) {
                    ClassExpr::Thing
                } else if is_owl_nothing(&n) {
                    ClassExpr::Nothing
                } else {
                    self.mentions.classes.push(n.clone());
                    ClassExpr::Class(n)
                })
            }
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, AdapterError>) -> Result<Vec<(T, Range<usize>)>, AdapterError> {
        let mut out = Vec::new();
        loop {
            let start = self.span().start;
            let v = item(self)?;
            out.push((v, start..self.prev_end()));
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn at_section_end(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Keyword(_)))
    }
}

/// Parses a complete Manchester document.
pub fn parse_manchester(text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        prefixes: prefixes.clone(),
        end: text.len(),
        mentions: Mentions::default(),
        _text: text,
    };
    let mut sig = SignatureAndSentences::empty(known::iri(known::LOGIC_SROIQ));
    let mut axioms: Vec<(ManchesterAxiom, Range<usize>)> = Vec::new();
    let mut declared: Vec<Entity> = Vec::new();
    while let Some(tok) = p.peek().cloned() {
        let frame_span = p.span();
        let Tok::Keyword(kw) = tok else {
            return p.err("expected a frame keyword such as `Class:`");
        };
        p.pos += 1;
        match kw.as_str() {
            "Prefix" => {
                let span = p.span();
                let Some(Tok::Word(label)) = p.peek().cloned() else { return p.err("expected `label:`") };
                let Some(label) = label.strip_suffix(':') else {
                    return Err(AdapterError::new("expected `label:`", span));
                };
                p.pos += 1;
                let Some(Tok::FullIri(ns)) = p.peek().cloned() else { return p.err("expected <namespace>") };
                p.pos += 1;
                p.prefixes.bind(label, ns);
            }
            "Ontology" => {
                if matches!(p.peek(), Some(Tok::FullIri(_))) {
                    p.pos += 1;
                }
            }
            "Import" => {
                let iri = p.name("an import IRI")?;
                sig.imports.push(iri);
            }
            "Class" => {
                let class = p.name("a class name")?;
                declared.push(Entity { iri: class.clone(), kind: EntityKind::Class, declared: true });
                while let Some(Tok::Keyword(section)) = p.peek().cloned() {
                    if !matches!(section.as_str(), "SubClassOf" | "EquivalentTo" | "DisjointUnionOf") {
                        break;
                    }
                    p.pos += 1;
                    let items = p.list(Parser::expr)?;
                    match section.as_str() {
                        "SubClassOf" => axioms.extend(
                            items.into_iter().map(|(e, s)| (ManchesterAxiom::SubClassOf(ClassExpr::Class(class.clone()), e), s)),
                        ),
                        "EquivalentTo" => axioms
                            .extend(items.into_iter().map(|(e, s)| (ManchesterAxiom::EquivalentTo(class.clone(), e), s))),
                        _ => {
                            if items.len() < 2 {
                                return Err(AdapterError::new("DisjointUnionOf needs at least two classes", frame_span));
                            }
                            let span = items[0].1.start..items[items.len() - 1].1.end;
                            let parts = items.into_iter().map(|(e, _)| e).collect();
                            axioms.push((ManchesterAxiom::DisjointUnionOf(class.clone(), parts), span));
                        }
                    }
                }
                if !p.at_section_end() {
                    return p.err("unexpected token in Class frame");
                }
            }
            "ObjectProperty" => {
                let prop = p.name("an object property")?;
                declared.push(Entity { iri: prop.clone(), kind: EntityKind::ObjectProperty, declared: true });
                while let Some(Tok::Keyword(section)) = p.peek().cloned() {
                    match section.as_str() {
                        "Characteristics" => {
                            p.pos += 1;
                            let items = p.list(|p| {
                                let span = p.span();
                                match p.peek() {
                                    Some(Tok::Word(w)) if w == "Transitive" => {
                                        p.pos += 1;
                                        Ok(Characteristic::Transitive)
                                    }
                                    Some(Tok::Word(w)) if w == "Asymmetric" => {
                                        p.pos += 1;
                                        Ok(Characteristic::Asymmetric)
                                    }
                                    Some(Tok::Word(w)) => {
                                        Err(AdapterError::new(format!("unsupported construct: characteristic `{w}`"), span))
                                    }
                                    _ => Err(AdapterError::new("expected a property characteristic", span)),
                                }
                            })?;
                            axioms.extend(items.into_iter().map(|(c, s)| (ManchesterAxiom::Characteristic(prop.clone(), c), s)));
                        }
                        "SubPropertyOf" => {
                            p.pos += 1;
                            let items = p.list(|p| {
                                let q = p.name("an object property")?;
                                p.mentions.properties.push(q.clone());
                                Ok(q)
                            })?;
                            axioms.extend(items.into_iter().map(|(q, s)| (ManchesterAxiom::SubPropertyOf(prop.clone(), q), s)));
                        }
                        _ => break,
                    }
                }
                if !p.at_section_end() {
                    return p.err("unexpected token in ObjectProperty frame");
                }
            }
            "Individual" => {
                let ind = p.individual()?;
                if let Individual::Named(n) = &ind {
                    declared.push(Entity { iri: n.clone(), kind: EntityKind::Individual, declared: true });
                }
                while let Some(Tok::Keyword(section)) = p.peek().cloned() {
                    match section.as_str() {
                        "Types" => {
                            p.pos += 1;
                            let items = p.list(Parser::expr)?;
                            axioms.extend(items.into_iter().map(|(e, s)| (ManchesterAxiom::Types(ind.clone(), e), s)));
                        }
                        "Facts" => {
                            p.pos += 1;
                            let items = p.list(|p| {
                                if p.word_is("not") {
                                    return p.err("unsupported construct: negative property assertion");
                                }
                                let prop = p.name("an object property")?;
                                p.mentions.properties.push(prop.clone());
                                let obj = p.individual()?;
                                Ok((prop, obj))
                            })?;
                            axioms.extend(
                                items.into_iter().map(|((q, o), s)| (ManchesterAxiom::Fact(ind.clone(), q, o), s)),
                            );
                        }
                        _ => break,
                    }
                }
                if !p.at_section_end() {
                    return p.err("unexpected token in Individual frame");
                }
            }
            other => {
                return Err(AdapterError::new(format!("`{other}:` is not allowed outside a frame"), frame_span));
            }
        }
    }
    let clash = |e: crate::model::KindClash| {
        AdapterError::new(format!("<{}> used both as {} and as {}", e.iri, e.first, e.second), 0..0)
    };
    for e in declared {
        sig.add_entity(e).map_err(clash)?;
    }
    let m = std::mem::take(&mut p.mentions);
    for (list, kind) in [(m.classes, EntityKind::Class), (m.properties, EntityKind::ObjectProperty), (m.individuals, EntityKind::Individual)] {
        for iri in list {
            sig.add_entity(Entity { iri, kind, declared: false }).map_err(clash)?;
        }
    }
    for (a, span) in axioms {
        sig.push_sentence(SentenceForm::Owl(a), Some(span));
    }
    Ok(sig)
}

/// Parses a standalone class expression, as used on the right of alignment
/// correspondences.
pub fn parse_class_expression(text: &str, prefixes: &PrefixMap) -> Result<ClassExpr, AdapterError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        prefixes: prefixes.clone(),
        end: text.len(),
        mentions: Mentions::default(),
        _text: text,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected token after class expression");
    }
    Ok(e)
}

pub struct ManchesterAdapter;

impl Adapter for ManchesterAdapter {
    fn logic(&self) -> Iri {
        known::iri(known::LOGIC_SROIQ)
    }

    fn serialization(&self) -> Iri {
        known::iri(known::SER_OWL2_MANCHESTER)
    }

    fn extract(&self, text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
        parse_manchester(text, prefixes)
    }
}
