//! RDF terms and triples, a Turtle reader and writer, and blank-node
//! graph isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use super::{Adapter, AdapterError};
use crate::iri::{compact_with, Compacted, Iri, PrefixMap};
use crate::known;
use crate::model::{Entity, EntityKind, SentenceForm, SignatureAndSentences};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RdfTerm {
    Iri(Iri),
    Blank(String),
    Literal { lexical: String, datatype: Option<Iri>, lang: Option<String> },
}

impl RdfTerm {
    pub fn iri(i: &Iri) -> Self {
        RdfTerm::Iri(i.clone())
    }

    pub fn literal(s: impl Into<String>) -> Self {
        RdfTerm::Literal { lexical: s.into(), datatype: None, lang: None }
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            RdfTerm::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, RdfTerm::Blank(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RdfTriple {
    pub subject: RdfTerm,
    pub predicate: Iri,
    pub object: RdfTerm,
}

impl RdfTriple {
    pub fn new(subject: RdfTerm, predicate: Iri, object: RdfTerm) -> Self {
        RdfTriple { subject, predicate, object }
    }
}

fn short(t: &RdfTerm) -> String {
    match t {
        RdfTerm::Iri(i) => i.local_name().to_owned(),
        RdfTerm::Blank(b) => format!("_:{b}"),
        RdfTerm::Literal { lexical, .. } => format!("{lexical:?}"),
    }
}

impl fmt::Display for RdfTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.predicate.as_str() == known::RDF_TYPE { "a" } else { self.predicate.local_name() };
        write!(f, "{} {p} {} .", short(&self.subject), short(&self.object))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName(String),
    Blank(String),
    Str { value: String },
    Number(String),
    LangTag(String),
    Carets,
    Dot,
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    A,
    True,
    False,
    PrefixDirective,
    BaseDirective,
    SparqlPrefix,
    SparqlBase,
}

fn unescape(raw: &str, at: usize) -> Result<String, AdapterError> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('b') => out.push('\u{8}'),
            Some('f') => out.push('\u{c}'),
            Some(c @ ('"' | '\'' | '\\')) => out.push(c),
            Some(u @ ('u' | 'U')) => {
                let n = if u == 'u' { 4 } else { 8 };
                let hex: String = chars.by_ref().take(n).collect();
                let ch = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                out.push(ch.ok_or_else(|| AdapterError::new("invalid unicode escape", at..at + raw.len()))?);
            }
            _ => return Err(AdapterError::new("invalid escape sequence", at..at + raw.len())),
        }
    }
    Ok(out)
}

fn pname_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '%')
}

fn lex(text: &str) -> Result<Vec<(Tok, Range<usize>)>, AdapterError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c == '#' {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        let tok = match c {
            '<' => {
                let end = rest.find('>').ok_or_else(|| AdapterError::new("unterminated <IRI>", i..text.len()))?;
                i += end + 1;
                Tok::Iri(unescape(&rest[1..end], start)?)
            }
            '"' | '\'' => {
                let long = rest.starts_with(if c == '"' { "\"\"\"" } else { "'''" });
                let quote_len = if long { 3 } else { 1 };
                let delim = &rest[..quote_len];
                let mut j = quote_len;
                let close = loop {
                    let Some(ch) = rest[j..].chars().next() else {
                        return Err(AdapterError::new("unterminated string literal", start..text.len()));
                    };
                    if ch == '\\' {
                        j += 1 + rest[j + 1..].chars().next().map_or(0, char::len_utf8);
                    } else if rest[j..].starts_with(delim) {
                        break j;
                    } else if !long && ch == '\n' {
                        return Err(AdapterError::new("newline in short string literal", start..start + j));
                    } else {
                        j += ch.len_utf8();
                    }
                };
                i += close + quote_len;
                Tok::Str { value: unescape(&rest[quote_len..close], start)? }
            }
            '@' => {
                let end = 1 + rest[1..].find(|c: char| !(c.is_alphanumeric() || c == '-')).unwrap_or(rest.len() - 1);
                let word = &rest[1..end];
                i += end;
                match word {
                    "prefix" => Tok::PrefixDirective,
                    "base" => Tok::BaseDirective,
                    "" => return Err(AdapterError::new("empty language tag", start..i)),
                    w => Tok::LangTag(w.to_owned()),
                }
            }
            '^' if rest.starts_with("^^") => {
                i += 2;
                Tok::Carets
            }
            '.' if !rest[1..].starts_with(|c: char| c.is_ascii_digit()) => {
                i += 1;
                Tok::Dot
            }
            ';' | ',' | '[' | ']' | '(' => {
                i += 1;
                match c {
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    _ => Tok::LParen,
                }
            }
            '_' if rest.starts_with("_:") => {
                let end = name_end(text, i + 2);
                i = end;
                Tok::Blank(text[start + 2..end].to_owned())
            }
            c if c.is_ascii_digit() || ((c == '+' || c == '-' || c == '.') && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit() || *b == b'.')) => {
                let mut end = i + 1;
                while end < text.len() {
                    let b = bytes[end];
                    let continues = b.is_ascii_digit()
                        || (b == b'.' && bytes.get(end + 1).is_some_and(u8::is_ascii_digit))
                        || matches!(b, b'e' | b'E')
                        || (matches!(b, b'+' | b'-') && matches!(bytes[end - 1], b'e' | b'E'));
                    if !continues {
                        break;
                    }
                    end += 1;
                }
                i = end;
                Tok::Number(text[start..end].to_owned())
            }
            c if pname_char(c) => {
                let end = name_end(text, i);
                let word = &text[i..end];
                i = end;
                match word {
                    "a" => Tok::A,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    w if w.eq_ignore_ascii_case("prefix") => Tok::SparqlPrefix,
                    w if w.eq_ignore_ascii_case("base") => Tok::SparqlBase,
                    w if w.contains(':') => Tok::PName(w.to_owned()),
                    w => return Err(AdapterError::new(format!("`{w}` is not a prefixed name"), start..end)),
                }
            }
            _ => return Err(AdapterError::new(format!("unexpected character `{c}`"), i..i + c.len_utf8())),
        };
        out.push((tok, start..i));
    }
    Ok(out)
}

/// Prefixed names and blank labels: name characters with interior dots.
fn name_end(text: &str, start: usize) -> usize {
    let mut end = start;
    let mut chars = text[start..].char_indices().peekable();
    while let Some((off, c)) = chars.next() {
        if pname_char(c) {
            end = start + off + c.len_utf8();
        } else if c == '.' && chars.peek().is_some_and(|(_, n)| pname_char(*n)) {
            end = start + off + 1;
        } else {
            break;
        }
    }
    end
}

/// Resolves a relative IRI reference against a base.
fn resolve_relative(base: Option<&Iri>, reference: &str) -> Option<Iri> {
    if let Ok(i) = Iri::parse(reference) {
        return Some(i);
    }
    let base = base?.as_str();
    let joined = if reference.is_empty() {
        base.split('#').next().unwrap_or(base).to_owned()
    } else if reference.starts_with('#') {
        format!("{}{reference}", base.split('#').next().unwrap_or(base))
    } else {
        let dir = &base[..base.rfind('/').map_or(base.len(), |i| i + 1)];
        format!("{dir}{reference}")
    };
    Iri::parse(joined).ok()
}

/// Turtle parsing result: triples plus the directives seen.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TurtleDocument {
    pub prefixes: PrefixMap,
    pub base: Option<Iri>,
    pub triples: Vec<RdfTriple>,
    /// Byte span of each triple's statement.
    pub spans: Vec<Range<usize>>,
}

struct Parser {
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
    end: usize,
    prefixes: PrefixMap,
    base: Option<Iri>,
    anon_prefix: String,
    used_labels: BTreeSet<String>,
    next_anon: usize,
    triples: Vec<RdfTriple>,
    spans: Vec<Range<usize>>,
    statement_start: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn span(&self) -> Range<usize> {
        self.toks.get(self.pos).map_or(self.end..self.end, |t| t.1.clone())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AdapterError> {
        Err(AdapterError::new(msg, self.span()))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), AdapterError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn fresh_blank(&mut self) -> String {
        loop {
            let label = format!("{}{}", self.anon_prefix, self.next_anon);
            self.next_anon += 1;
            if !self.used_labels.contains(&label) {
                self.used_labels.insert(label.clone());
                return label;
            }
        }
    }

    fn iri_tok(&self, tok: &Tok, span: Range<usize>) -> Result<Iri, AdapterError> {
        match tok {
            Tok::Iri(r) => resolve_relative(self.base.as_ref(), r)
                .ok_or_else(|| AdapterError::new(format!("cannot resolve IRI reference <{r}>"), span)),
            Tok::PName(p) => self.prefixes.resolve(p).map_err(|e| AdapterError::new(e.to_string(), span)),
            _ => Err(AdapterError::new("expected an IRI", span)),
        }
    }

    fn emit(&mut self, s: RdfTerm, p: Iri, o: RdfTerm) {
        self.triples.push(RdfTriple::new(s, p, o));
        self.spans.push(self.statement_start..self.end);
    }

    fn document(&mut self) -> Result<(), AdapterError> {
        while let Some(tok) = self.peek().cloned() {
            self.statement_start = self.span().start;
            let first_new = self.triples.len();
            match tok {
                Tok::PrefixDirective | Tok::SparqlPrefix => {
                    self.pos += 1;
                    let span = self.span();
                    let Some(Tok::PName(label)) = self.peek().cloned() else { return self.err("expected `label:`") };
                    let Some(label) = label.strip_suffix(':').filter(|l| !l.contains(':')) else {
                        return Err(AdapterError::new("expected `label:`", span));
                    };
                    self.pos += 1;
                    let span = self.span();
                    let Some(Tok::Iri(ns)) = self.peek().cloned() else { return self.err("expected <namespace>") };
                    self.pos += 1;
                    let ns = resolve_relative(self.base.as_ref(), &ns)
                        .ok_or_else(|| AdapterError::new("namespace must be absolute", span))?;
                    self.prefixes.bind(label, ns.as_str());
                    if tok == Tok::PrefixDirective {
                        self.expect(Tok::Dot, "`.` after @prefix")?;
                    }
                }
                Tok::BaseDirective | Tok::SparqlBase => {
                    self.pos += 1;
                    let span = self.span();
                    let Some(Tok::Iri(b)) = self.peek().cloned() else { return self.err("expected <base>") };
                    self.pos += 1;
                    self.base = Some(
                        resolve_relative(self.base.as_ref(), &b).ok_or_else(|| AdapterError::new("base must be absolute", span))?,
                    );
                    if tok == Tok::BaseDirective {
                        self.expect(Tok::Dot, "`.` after @base")?;
                    }
                }
                Tok::LBracket => {
                    let subject = self.blank_property_list()?;
                    if self.peek() != Some(&Tok::Dot) {
                        self.predicate_object_list(&subject)?;
                    }
                    self.expect(Tok::Dot, "`.` at end of statement")?;
                }
                _ => {
                    let subject = self.subject()?;
                    self.predicate_object_list(&subject)?;
                    self.expect(Tok::Dot, "`.` at end of statement")?;
                }
            }
            let end = self.toks[self.pos - 1].1.end;
            for s in &mut self.spans[first_new..] {
                *s = self.statement_start..end;
            }
        }
        Ok(())
    }

    fn subject(&mut self) -> Result<RdfTerm, AdapterError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(t @ (Tok::Iri(_) | Tok::PName(_))) => {
                self.pos += 1;
                Ok(RdfTerm::Iri(self.iri_tok(&t, span)?))
            }
            Some(Tok::Blank(b)) => {
                self.pos += 1;
                Ok(RdfTerm::Blank(b))
            }
            Some(Tok::LParen) => self.err("unsupported construct: RDF collections"),
            _ => self.err("expected a subject"),
        }
    }

    fn blank_property_list(&mut self) -> Result<RdfTerm, AdapterError> {
        self.expect(Tok::LBracket, "`[`")?;
        let node = RdfTerm::Blank(self.fresh_blank());
        if self.peek() != Some(&Tok::RBracket) {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(node)
    }

    fn predicate_object_list(&mut self, subject: &RdfTerm) -> Result<(), AdapterError> {
        loop {
            let span = self.span();
            let predicate = match self.peek().cloned() {
                Some(Tok::A) => {
                    self.pos += 1;
                    known::iri(known::RDF_TYPE)
                }
                Some(t @ (Tok::Iri(_) | Tok::PName(_))) => {
                    self.pos += 1;
                    self.iri_tok(&t, span)?
                }
                _ => return self.err("expected a predicate"),
            };
            loop {
                let object = self.object()?;
                self.emit(subject.clone(), predicate.clone(), object);
                if self.peek() != Some(&Tok::Comma) {
                    break;
                }
                self.pos += 1;
            }
            if self.peek() != Some(&Tok::Semi) {
                return Ok(());
            }
            while self.peek() == Some(&Tok::Semi) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(Tok::Dot | Tok::RBracket) | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<RdfTerm, AdapterError> {
        let span = self.span();
        let xsd = |l: &str| Some(Iri::parse(format!("{}{l}", known::XSD)).expect("xsd IRI"));
        match self.peek().cloned() {
            Some(t @ (Tok::Iri(_) | Tok::PName(_))) => {
                self.pos += 1;
                Ok(RdfTerm::Iri(self.iri_tok(&t, span)?))
            }
            Some(Tok::Blank(b)) => {
                self.pos += 1;
                Ok(RdfTerm::Blank(b))
            }
            Some(Tok::LBracket) => self.blank_property_list(),
            Some(Tok::LParen) => self.err("unsupported construct: RDF collections"),
            Some(Tok::Str { value }) => {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::LangTag(l)) => {
                        self.pos += 1;
                        Ok(RdfTerm::Literal { lexical: value, datatype: None, lang: Some(l.to_ascii_lowercase()) })
                    }
                    Some(Tok::Carets) => {
                        self.pos += 1;
                        let span = self.span();
                        let Some(t) = self.peek().cloned() else { return self.err("expected a datatype IRI") };
                        self.pos += 1;
                        let dt = self.iri_tok(&t, span)?;
                        Ok(RdfTerm::Literal { lexical: value, datatype: Some(dt), lang: None })
                    }
                    _ => Ok(RdfTerm::literal(value)),
                }
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                let dt = if n.contains(['e', 'E']) {
                    "double"
                } else if n.contains('.') {
                    "decimal"
                } else {
                    "integer"
                };
                Ok(RdfTerm::Literal { lexical: n, datatype: xsd(dt), lang: None })
            }
            Some(b @ (Tok::True | Tok::False)) => {
                self.pos += 1;
                let lexical = if b == Tok::True { "true" } else { "false" };
                Ok(RdfTerm::Literal { lexical: lexical.to_owned(), datatype: xsd("boolean"), lang: None })
            }
            _ => self.err("expected an object"),
        }
    }
}

/// Parses Turtle text. Anonymous blank nodes are labelled
/// `{anon_prefix}0`, `{anon_prefix}1`, … in order of appearance, skipping
/// labels written explicitly in the text.
pub fn parse_turtle(text: &str, prefixes: &PrefixMap, anon_prefix: &str) -> Result<TurtleDocument, AdapterError> {
    let toks = lex(text)?;
    let used_labels = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Blank(b) => Some(b.clone()),
            _ => None,
        })
        .collect();
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        prefixes: prefixes.clone(),
        base: None,
        anon_prefix: anon_prefix.to_owned(),
        used_labels,
        next_anon: 0,
        triples: Vec::new(),
        spans: Vec::new(),
        statement_start: 0,
    };
    p.document()?;
    let mut local = PrefixMap::new();
    for (k, v) in p.prefixes.iter() {
        if prefixes.get(k) != Some(v) {
            local.bind(k, v);
        }
    }
    Ok(TurtleDocument { prefixes: local, base: p.base, triples: p.triples, spans: p.spans })
}

/// Signature of a triple set: every IRI is an rdf-resource, referenced.
pub fn triples_to_signature(doc: &TurtleDocument) -> SignatureAndSentences {
    let mut sig = SignatureAndSentences::empty(known::iri(known::LOGIC_RDF));
    let mut add = |i: &Iri| {
        if i.as_str() != known::RDF_TYPE {
            sig.add_entity(Entity { iri: i.clone(), kind: EntityKind::RdfResource, declared: false })
                .expect("only one entity kind is used");
        }
    };
    for t in &doc.triples {
        for term in [&t.subject, &t.object] {
            match term {
                RdfTerm::Iri(i) => add(i),
                RdfTerm::Literal { datatype: Some(_), .. } | RdfTerm::Literal { .. } | RdfTerm::Blank(_) => {}
            }
        }
        add(&t.predicate);
    }
    let mut out = sig;
    for (t, span) in doc.triples.iter().zip(&doc.spans) {
        out.push_sentence(SentenceForm::Rdf(t.clone()), Some(span.clone()));
    }
    out
}

/// Extracts RDF/Turtle blocks. `anon_prefix` names anonymous blank nodes.
#[derive(Debug, Clone)]
pub struct TurtleAdapter {
    pub anon_prefix: String,
}

impl Default for TurtleAdapter {
    fn default() -> Self {
        TurtleAdapter { anon_prefix: "b".to_owned() }
    }
}

impl Adapter for TurtleAdapter {
    fn logic(&self) -> Iri {
        known::iri(known::LOGIC_RDF)
    }

    fn serialization(&self) -> Iri {
        known::iri(known::SER_RDF_TURTLE)
    }

    fn extract(&self, text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
        Ok(triples_to_signature(&parse_turtle(text, prefixes, &self.anon_prefix)?))
    }
}

fn valid_local(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !s.ends_with('.')
        && !s.starts_with(['.', '-'])
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// Writes Turtle. Every prefix in `prefixes` is declared, in alphabetical
/// order; statements are sorted by subject, predicate and object and
/// grouped per subject.
pub fn write_turtle(triples: &[RdfTriple], prefixes: &PrefixMap) -> String {
    let declared: BTreeMap<&str, &str> = prefixes.iter().collect();
    let mut name = |i: &Iri| -> String {
        match compact_with(i, prefixes, valid_local) {
            Compacted::Curie(c) => format!("{}:{}", c.prefix.unwrap_or_default(), c.reference),
            Compacted::Iri(i) => format!("<{i}>"),
        }
    };
    let term = |t: &RdfTerm, name: &mut dyn FnMut(&Iri) -> String| match t {
        RdfTerm::Iri(i) => name(i),
        RdfTerm::Blank(b) => format!("_:{b}"),
        RdfTerm::Literal { lexical, datatype, lang } => {
            let mut s = format!("\"{}\"", escape_literal(lexical));
            if let Some(l) = lang {
                s.push('@');
                s.push_str(l);
            } else if let Some(d) = datatype {
                s.push_str("^^");
                s.push_str(&name(d));
            }
            s
        }
    };
    let mut sorted: Vec<&RdfTriple> = triples.iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut body = String::new();
    let mut i = 0;
    while i < sorted.len() {
        let subject = &sorted[i].subject;
        let mut j = i;
        while j < sorted.len() && &sorted[j].subject == subject {
            j += 1;
        }
        body.push_str(&term(subject, &mut name));
        let group = &sorted[i..j];
        let mut k = 0;
        while k < group.len() {
            let pred = &group[k].predicate;
            let mut l = k;
            while l < group.len() && &group[l].predicate == pred {
                l += 1;
            }
            if k > 0 {
                body.push_str(" ;\n   ");
            }
            let p = if pred.as_str() == known::RDF_TYPE { "a".to_owned() } else { name(pred) };
            let objects: Vec<String> = group[k..l].iter().map(|t| term(&t.object, &mut name)).collect();
            body.push(' ');
            body.push_str(&p);
            body.push(' ');
            body.push_str(&objects.join(", "));
            k = l;
        }
        body.push_str(" .\n");
        i = j;
    }
    let mut out = String::new();
    for (label, ns) in &declared {
        out.push_str(&format!("@prefix {label}: <{ns}> .\n"));
    }
    if !declared.is_empty() && !body.is_empty() {
        out.push('\n');
    }
    out.push_str(&body);
    out
}

/// `true` if the two graphs are equal up to a renaming of blank nodes.
pub fn isomorphic(a: &[RdfTriple], b: &[RdfTriple]) -> bool {
    let a: BTreeSet<&RdfTriple> = a.iter().collect();
    let b: BTreeSet<&RdfTriple> = b.iter().collect();
    if a.len() != b.len() {
        return false;
    }
    let blanks = |g: &BTreeSet<&RdfTriple>| -> BTreeSet<String> {
        g.iter()
            .flat_map(|t| [&t.subject, &t.object])
            .filter_map(|t| match t {
                RdfTerm::Blank(l) => Some(l.clone()),
                _ => None,
            })
            .collect()
    };
    let (ba, bb) = (blanks(&a), blanks(&b));
    if ba.len() != bb.len() {
        return false;
    }
    let ca = colour(&a, &ba);
    let cb = colour(&b, &bb);
    let mut hist_a: Vec<u64> = ca.values().copied().collect();
    let mut hist_b: Vec<u64> = cb.values().copied().collect();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }
    let order: Vec<String> = ba.into_iter().collect();
    let mut mapping = HashMap::new();
    let mut taken = BTreeSet::new();
    search(&order, 0, &ca, &cb, &a, &b, &mut mapping, &mut taken)
}

/// Iterated colour refinement of blank nodes by their neighbourhoods.
fn colour(g: &BTreeSet<&RdfTriple>, blanks: &BTreeSet<String>) -> HashMap<String, u64> {
    use std::hash::{DefaultHasher, Hash, Hasher};
    let mut colours: HashMap<String, u64> = blanks.iter().map(|b| (b.clone(), 0)).collect();
    let key = |t: &RdfTerm, colours: &HashMap<String, u64>| match t {
        RdfTerm::Blank(l) => format!("_{}", colours[l]),
        other => format!("{other:?}"),
    };
    for _ in 0..blanks.len().min(8) + 1 {
        let mut next = HashMap::new();
        for b in blanks {
            let mut sigs: Vec<String> = Vec::new();
            for t in g {
                if matches!(&t.subject, RdfTerm::Blank(l) if l == b) {
                    sigs.push(format!("out {} {}", t.predicate, key(&t.object, &colours)));
                }
                if matches!(&t.object, RdfTerm::Blank(l) if l == b) {
                    sigs.push(format!("in {} {}", t.predicate, key(&t.subject, &colours)));
                }
            }
            sigs.sort();
            let mut h = DefaultHasher::new();
            sigs.hash(&mut h);
            next.insert(b.clone(), h.finish());
        }
        colours = next;
    }
    colours
}

#[allow(clippy::too_many_arguments)]
fn search(
    order: &[String],
    k: usize,
    ca: &HashMap<String, u64>,
    cb: &HashMap<String, u64>,
    a: &BTreeSet<&RdfTriple>,
    b: &BTreeSet<&RdfTriple>,
    mapping: &mut HashMap<String, String>,
    taken: &mut BTreeSet<String>,
) -> bool {
    if k == order.len() {
        let map = |t: &RdfTerm| match t {
            RdfTerm::Blank(l) => RdfTerm::Blank(mapping[l].clone()),
            other => other.clone(),
        };
        return a.iter().all(|t| b.contains(&RdfTriple::new(map(&t.subject), t.predicate.clone(), map(&t.object))));
    }
    let label = &order[k];
    let candidates: Vec<String> = cb.iter().filter(|(l, c)| **c == ca[label] && !taken.contains(*l)).map(|(l, _)| l.clone()).collect();
    for c in candidates {
        mapping.insert(label.clone(), c.clone());
        taken.insert(c.clone());
        if search(order, k + 1, ca, cb, a, b, mapping, taken) {
            return true;
        }
        taken.remove(&c);
        mapping.remove(label);
    }
    false
}
