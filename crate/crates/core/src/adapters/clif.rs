//! Common Logic Interchange Format, the subset of s-expressions with
//! `forall`, `exists`, `and`, `or`, `not`, `if`, `iff`, `=`, atomic
//! sentences and `cl-imports`. Variables may occur in predicate position.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use super::{display_name, resolve_name, Adapter, AdapterError};
use crate::iri::{Iri, PrefixMap};
use crate::known;
use crate::model::{Entity, EntityKind, SentenceForm, SignatureAndSentences};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClifTerm {
    Var(String),
    Name(Iri),
    /// `...name`
    SeqMarker(Iri),
    Apply(Box<ClifTerm>, Vec<ClifTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClifSentence {
    Atom { pred: ClifTerm, args: Vec<ClifTerm> },
    Equal(ClifTerm, ClifTerm),
    Not(Box<ClifSentence>),
    And(Vec<ClifSentence>),
    Or(Vec<ClifSentence>),
    If(Box<ClifSentence>, Box<ClifSentence>),
    Iff(Box<ClifSentence>, Box<ClifSentence>),
    Forall(Vec<String>, Box<ClifSentence>),
    Exists(Vec<String>, Box<ClifSentence>),
    Imports(Iri),
}

impl ClifTerm {
    pub fn var(v: &str) -> ClifTerm {
        ClifTerm::Var(v.to_owned())
    }
}

impl ClifSentence {
    pub fn atom(pred: &Iri, args: Vec<ClifTerm>) -> Self {
        ClifSentence::Atom { pred: ClifTerm::Name(pred.clone()), args }
    }

    pub fn not(s: ClifSentence) -> Self {
        ClifSentence::Not(Box::new(s))
    }

    pub fn implies(a: ClifSentence, b: ClifSentence) -> Self {
        ClifSentence::If(Box::new(a), Box::new(b))
    }

    pub fn iff(a: ClifSentence, b: ClifSentence) -> Self {
        ClifSentence::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: &[&str], body: ClifSentence) -> Self {
        ClifSentence::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn exists(vars: &[&str], body: ClifSentence) -> Self {
        ClifSentence::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    /// Deepest nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            ClifSentence::Atom { .. } | ClifSentence::Equal(..) | ClifSentence::Imports(_) => 0,
            ClifSentence::Not(s) => s.quantifier_depth(),
            ClifSentence::And(xs) | ClifSentence::Or(xs) => xs.iter().map(ClifSentence::quantifier_depth).max().unwrap_or(0),
            ClifSentence::If(a, b) | ClifSentence::Iff(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            ClifSentence::Forall(_, s) | ClifSentence::Exists(_, s) => 1 + s.quantifier_depth(),
        }
    }

    /// Names (not variables) occurring anywhere.
    pub fn names(&self) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let ClifTerm::Name(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&ClifTerm)) {
        fn term(t: &ClifTerm, f: &mut impl FnMut(&ClifTerm)) {
            f(t);
            if let ClifTerm::Apply(h, args) = t {
                term(h, f);
                args.iter().for_each(|a| term(a, f));
            }
        }
        match self {
            ClifSentence::Atom { pred, args } => {
                term(pred, f);
                args.iter().for_each(|a| term(a, f));
            }
            ClifSentence::Equal(a, b) => {
                term(a, f);
                term(b, f);
            }
            ClifSentence::Not(s) | ClifSentence::Forall(_, s) | ClifSentence::Exists(_, s) => s.visit_terms(f),
            ClifSentence::And(xs) | ClifSentence::Or(xs) => xs.iter().for_each(|x| x.visit_terms(f)),
            ClifSentence::If(a, b) | ClifSentence::Iff(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            ClifSentence::Imports(_) => {}
        }
    }

    pub fn map_names(&self, f: &impl Fn(&Iri) -> Iri) -> ClifSentence {
        fn term(t: &ClifTerm, f: &impl Fn(&Iri) -> Iri) -> ClifTerm {
            match t {
                ClifTerm::Var(v) => ClifTerm::Var(v.clone()),
                ClifTerm::Name(n) => ClifTerm::Name(f(n)),
                ClifTerm::SeqMarker(n) => ClifTerm::SeqMarker(f(n)),
                ClifTerm::Apply(h, args) => ClifTerm::Apply(Box::new(term(h, f)), args.iter().map(|a| term(a, f)).collect()),
            }
        }
        let b = |s: &ClifSentence| Box::new(s.map_names(f));
        match self {
            ClifSentence::Atom { pred, args } => {
                ClifSentence::Atom { pred: term(pred, f), args: args.iter().map(|a| term(a, f)).collect() }
            }
            ClifSentence::Equal(x, y) => ClifSentence::Equal(term(x, f), term(y, f)),
            ClifSentence::Not(s) => ClifSentence::Not(b(s)),
            ClifSentence::And(xs) => ClifSentence::And(xs.iter().map(|x| x.map_names(f)).collect()),
            ClifSentence::Or(xs) => ClifSentence::Or(xs.iter().map(|x| x.map_names(f)).collect()),
            ClifSentence::If(x, y) => ClifSentence::If(b(x), b(y)),
            ClifSentence::Iff(x, y) => ClifSentence::Iff(b(x), b(y)),
            ClifSentence::Forall(v, s) => ClifSentence::Forall(v.clone(), b(s)),
            ClifSentence::Exists(v, s) => ClifSentence::Exists(v.clone(), b(s)),
            ClifSentence::Imports(i) => ClifSentence::Imports(f(i)),
        }
    }
}

const KEYWORDS: &[&str] = &["forall", "exists", "and", "or", "not", "if", "iff", "=", "cl-imports", "cl-text", "cl-module", "cl-excludes", "cl-comment", "cl-roles"];

/// Prints CLIF text. With `local_names` names print as their local part;
/// otherwise they are compacted so the output re-parses to an equal tree.
pub struct ClifPrinter<'a> {
    pub prefixes: &'a PrefixMap,
    pub local_names: bool,
}

impl ClifPrinter<'_> {
    fn name(&self, iri: &Iri, bound: &[String]) -> String {
        if self.local_names {
            return iri.local_name().to_owned();
        }
        let taken = |s: &str| KEYWORDS.contains(&s) || s.starts_with("...") || bound.iter().any(|b| b == s);
        display_name(iri, self.prefixes, taken)
    }

    fn term(&self, t: &ClifTerm, bound: &[String]) -> String {
        match t {
            ClifTerm::Var(v) => v.clone(),
            ClifTerm::Name(n) => self.name(n, bound),
            ClifTerm::SeqMarker(n) => format!("...{}", self.name(n, bound)),
            ClifTerm::Apply(h, args) => {
                let mut parts = vec![self.term(h, bound)];
                parts.extend(args.iter().map(|a| self.term(a, bound)));
                format!("({})", parts.join(" "))
            }
        }
    }

    pub fn sentence(&self, s: &ClifSentence) -> String {
        self.sentence_in(s, &mut Vec::new())
    }

    fn sentence_in(&self, s: &ClifSentence, bound: &mut Vec<String>) -> String {
        let list = |head: &str, parts: Vec<String>| {
            if parts.is_empty() {
                format!("({head})")
            } else {
                format!("({head} {})", parts.join(" "))
            }
        };
        match s {
            ClifSentence::Atom { pred, args } => {
                let mut parts = vec![self.term(pred, bound)];
                parts.extend(args.iter().map(|a| self.term(a, bound)));
                format!("({})", parts.join(" "))
            }
            ClifSentence::Equal(a, b) => format!("(= {} {})", self.term(a, bound), self.term(b, bound)),
            ClifSentence::Not(x) => format!("(not {})", self.sentence_in(x, bound)),
            ClifSentence::And(xs) => list("and", xs.iter().map(|x| self.sentence_in(x, bound)).collect()),
            ClifSentence::Or(xs) => list("or", xs.iter().map(|x| self.sentence_in(x, bound)).collect()),
            ClifSentence::If(a, b) => format!("(if {} {})", self.sentence_in(a, bound), self.sentence_in(b, bound)),
            ClifSentence::Iff(a, b) => format!("(iff {} {})", self.sentence_in(a, bound), self.sentence_in(b, bound)),
            ClifSentence::Forall(vs, x) | ClifSentence::Exists(vs, x) => {
                let q = if matches!(s, ClifSentence::Forall(..)) { "forall" } else { "exists" };
                let mark = bound.len();
                bound.extend(vs.iter().cloned());
                let body = self.sentence_in(x, bound);
                bound.truncate(mark);
                format!("({q} ({}) {body})", vs.join(" "))
            }
            ClifSentence::Imports(i) => format!("(cl-imports {})", self.name(i, bound)),
        }
    }
}

impl fmt::Display for ClifSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ClifPrinter { prefixes: &PrefixMap::new(), local_names: true }.sentence(self))
    }
}

#[derive(Debug, Clone)]
enum SExpr {
    Token(String, Range<usize>),
    Quoted(Range<usize>),
    List(Vec<SExpr>, Range<usize>),
}

impl SExpr {
    fn span(&self) -> Range<usize> {
        match self {
            SExpr::Token(_, s) | SExpr::Quoted(s) | SExpr::List(_, s) => s.clone(),
        }
    }
}

fn read(text: &str) -> Result<Vec<SExpr>, AdapterError> {
    let mut stack: Vec<(Vec<SExpr>, usize)> = vec![(Vec::new(), 0)];
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => stack.push((Vec::new(), i)),
            ')' => {
                if stack.len() == 1 {
                    return Err(AdapterError::new("unbalanced `)`", i..i + 1));
                }
                let (items, start) = stack.pop().unwrap();
                stack.last_mut().unwrap().0.push(SExpr::List(items, start..i + 1));
            }
            '\'' | '"' => {
                let mut end = None;
                while let Some((j, d)) = chars.next() {
                    if d == '\\' {
                        chars.next();
                    } else if d == c {
                        end = Some(j + 1);
                        break;
                    }
                }
                let end = end.ok_or_else(|| AdapterError::new("unterminated quoted string", i..text.len()))?;
                stack.last_mut().unwrap().0.push(SExpr::Quoted(i..end));
            }
            _ => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_whitespace() || matches!(d, '(' | ')' | '\'' | '"') {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                stack.last_mut().unwrap().0.push(SExpr::Token(text[i..end].to_owned(), i..end));
            }
        }
    }
    if stack.len() > 1 {
        let start = stack.last().unwrap().1;
        return Err(AdapterError::new("unbalanced `(`", start..start + 1));
    }
    Ok(stack.pop().unwrap().0)
}

struct Reader<'a> {
    prefixes: &'a PrefixMap,
    bound: Vec<String>,
    names: Vec<(Iri, EntityKind)>,
}

impl Reader<'_> {
    fn term(&mut self, e: &SExpr) -> Result<ClifTerm, AdapterError> {
        match e {
            SExpr::Token(t, span) => {
                if KEYWORDS.contains(&t.as_str()) {
                    return Err(AdapterError::new(format!("`{t}` cannot be used as a term"), span.clone()));
                }
                if self.bound.iter().any(|b| b == t) {
                    return Ok(ClifTerm::Var(t.clone()));
                }
                if let Some(rest) = t.strip_prefix("...") {
                    let iri = resolve_name(if rest.is_empty() { "..." } else { rest }, self.prefixes, span.clone())?;
                    self.names.push((iri.clone(), EntityKind::ClSequenceMarker));
                    return Ok(ClifTerm::SeqMarker(iri));
                }
                let iri = resolve_name(t, self.prefixes, span.clone())?;
                self.names.push((iri.clone(), EntityKind::ClName));
                Ok(ClifTerm::Name(iri))
            }
            SExpr::Quoted(span) => Err(AdapterError::new("unsupported construct: quoted strings", span.clone())),
            SExpr::List(items, span) => {
                let (head, args) = items.split_first().ok_or_else(|| AdapterError::new("empty term", span.clone()))?;
                let head = self.term(head)?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?;
                Ok(ClifTerm::Apply(Box::new(head), args))
            }
        }
    }

    fn sentences(&mut self, items: &[SExpr]) -> Result<Vec<ClifSentence>, AdapterError> {
        items.iter().map(|i| self.sentence(i)).collect()
    }

    fn exactly<'e>(&self, items: &'e [SExpr], n: usize, what: &str, span: &Range<usize>) -> Result<&'e [SExpr], AdapterError> {
        if items.len() == n {
            Ok(items)
        } else {
            Err(AdapterError::new(format!("`{what}` takes {n} argument(s), found {}", items.len()), span.clone()))
        }
    }

    fn sentence(&mut self, e: &SExpr) -> Result<ClifSentence, AdapterError> {
        let SExpr::List(items, span) = e else {
            return Err(AdapterError::new("expected a parenthesized sentence", e.span()));
        };
        let Some((head, rest)) = items.split_first() else {
            return Err(AdapterError::new("empty sentence `()`", span.clone()));
        };
        let keyword = match head {
            SExpr::Token(t, _) if !self.bound.contains(t) => t.as_str(),
            _ => "",
        };
        Ok(match keyword {
            "and" => ClifSentence::And(self.sentences(rest)?),
            "or" => ClifSentence::Or(self.sentences(rest)?),
            "not" => ClifSentence::not(self.sentence(&self.exactly(rest, 1, "not", span)?[0])?),
            "if" | "iff" => {
                let [a, b] = self.exactly(rest, 2, keyword, span)? else { unreachable!() };
                let (a, b) = (self.sentence(a)?, self.sentence(b)?);
                if keyword == "if" {
                    ClifSentence::implies(a, b)
                } else {
                    ClifSentence::iff(a, b)
                }
            }
            "=" => {
                let [a, b] = self.exactly(rest, 2, "=", span)? else { unreachable!() };
                ClifSentence::Equal(self.term(a)?, self.term(b)?)
            }
            "forall" | "exists" => {
                let [vars, body] = self.exactly(rest, 2, keyword, span)? else { unreachable!() };
                let SExpr::List(vs, vspan) = vars else {
                    return Err(AdapterError::new("expected a variable list", vars.span()));
                };
                let mut names = Vec::new();
                for v in vs {
                    match v {
                        SExpr::Token(t, _) if !KEYWORDS.contains(&t.as_str()) => names.push(t.clone()),
                        SExpr::List(..) => {
                            return Err(AdapterError::new("unsupported construct: restricted quantification", v.span()))
                        }
                        _ => return Err(AdapterError::new("expected a variable", v.span())),
                    }
                }
                if names.is_empty() {
                    return Err(AdapterError::new("empty variable list", vspan.clone()));
                }
                let mark = self.bound.len();
                self.bound.extend(names.iter().cloned());
                let body = self.sentence(body);
                self.bound.truncate(mark);
                let body = Box::new(body?);
                if keyword == "forall" {
                    ClifSentence::Forall(names, body)
                } else {
                    ClifSentence::Exists(names, body)
                }
            }
            "cl-imports" => {
                let [name] = self.exactly(rest, 1, "cl-imports", span)? else { unreachable!() };
                let SExpr::Token(t, tspan) = name else {
                    return Err(AdapterError::new("expected an ontology name", name.span()));
                };
                ClifSentence::Imports(resolve_name(t, self.prefixes, tspan.clone())?)
            }
            "cl-text" | "cl-module" | "cl-excludes" | "cl-roles" => {
                return Err(AdapterError::new(format!("unsupported construct `{keyword}`"), span.clone()))
            }
            _ => {
                let pred = self.term(head)?;
                let args = rest.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?;
                ClifSentence::Atom { pred, args }
            }
        })
    }
}

/// Parses CLIF text; `cl-imports` become imports, `cl-comment` forms are
/// skipped.
pub fn parse_clif(text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
    let mut sig = SignatureAndSentences::empty(known::iri(known::LOGIC_COMMON_LOGIC));
    let mut r = Reader { prefixes, bound: Vec::new(), names: Vec::new() };
    for e in read(text)? {
        if let SExpr::List(items, _) = &e {
            if matches!(items.first(), Some(SExpr::Token(t, _)) if t == "cl-comment") {
                continue;
            }
        }
        match r.sentence(&e)? {
            ClifSentence::Imports(i) => {
                if !sig.imports.contains(&i) {
                    sig.imports.push(i)
                }
            }
            s => sig.push_sentence(SentenceForm::Clif(s), Some(e.span())),
        }
    }
    for (iri, kind) in r.names {
        sig.add_entity(Entity { iri: iri.clone(), kind, declared: false }).map_err(|c| {
            AdapterError::new(format!("<{}> used both as {} and as {}", c.iri, c.first, c.second), 0..0)
        })?;
    }
    Ok(sig)
}

pub struct ClifAdapter;

impl Adapter for ClifAdapter {
    fn logic(&self) -> Iri {
        known::iri(known::LOGIC_COMMON_LOGIC)
    }

    fn serialization(&self) -> Iri {
        known::iri(known::SER_CLIF)
    }

    fn extract(&self, text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
        parse_clif(text, prefixes)
    }
}
