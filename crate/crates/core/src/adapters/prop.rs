//! Propositional logic in Hets syntax.
//!
//! ```text
//! props PT, T, S, AR, PD
//! . S ∨ T ∨ AR ∨ PD ⟶ PT
//! . S /\ T --> false
//! ```
//!
//! Operators (tightest first): `¬`/`not`, `∧`/`/\`, `∨`/`\/`,
//! `⟶`/`-->`/`=>` (right associative), `⟷`/`<->`/`<=>`. Constants `⊥`/`false`
//! and `⊤`/`true`. A trailing `%(label)%` on a sentence is ignored.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use super::{name_end, resolve_name, Adapter, AdapterError};
use crate::iri::{Iri, PrefixMap};
use crate::known;
use crate::model::{Entity, EntityKind, SentenceForm, SignatureAndSentences};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Iri),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    True,
    False,
}

impl Formula {
    pub fn atom(iri: Iri) -> Self {
        Formula::Atom(iri)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Iri>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::True | Formula::False => {}
        }
    }

    /// Renames atoms through `f`.
    pub fn map_atoms(&self, f: &impl Fn(&Iri) -> Iri) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::True => Formula::True,
            Formula::False => Formula::False,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(_) => 3,
            Formula::And(_) => 4,
            Formula::Not(_) => 5,
            _ => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("atom <{0}> has no truth value")]
pub struct UnassignedAtom(pub Iri);

/// Classical truth value of `f` under `assignment`.
pub fn eval_prop(f: &Formula, assignment: &HashMap<Iri, bool>) -> Result<bool, UnassignedAtom> {
    Ok(match f {
        Formula::Atom(a) => *assignment.get(a).ok_or_else(|| UnassignedAtom(a.clone()))?,
        Formula::Not(x) => !eval_prop(x, assignment)?,
        Formula::And(xs) => {
            let mut v = true;
            for x in xs {
                v &= eval_prop(x, assignment)?;
            }
            v
        }
        Formula::Or(xs) => {
            let mut v = false;
            for x in xs {
                v |= eval_prop(x, assignment)?;
            }
            v
        }
        Formula::Implies(a, b) => {
            let a = eval_prop(a, assignment)?;
            let b = eval_prop(b, assignment)?;
            !a || b
        }
        Formula::Iff(a, b) => eval_prop(a, assignment)? == eval_prop(b, assignment)?,
        Formula::True => true,
        Formula::False => false,
    })
}

/// Prints in Unicode Hets syntax with local names; use [`PropPrinter`] for
/// re-parseable output.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PropPrinter { prefixes: &PrefixMap::new(), local_names: true }.write(self, f)
    }
}

/// Prints formulas with names compacted against a prefix map.
pub struct PropPrinter<'a> {
    pub prefixes: &'a PrefixMap,
    pub local_names: bool,
}

impl PropPrinter<'_> {
    pub fn print(&self, f: &Formula) -> String {
        struct W<'a, 'b>(&'a PropPrinter<'b>, &'a Formula);
        impl fmt::Display for W<'_, '_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(self.1, f)
            }
        }
        W(self, f).to_string()
    }

    fn write(&self, form: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &Formula, min: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if c.precedence() < min {
                f.write_str("(")?;
                self.write(c, f)?;
                f.write_str(")")
            } else {
                self.write(c, f)
            }
        };
        match form {
            Formula::Atom(a) => {
                if self.local_names {
                    f.write_str(a.local_name())
                } else {
                    f.write_str(&super::display_name(a, self.prefixes, is_keyword))
                }
            }
            Formula::True => f.write_str("⊤"),
            Formula::False => f.write_str("⊥"),
            Formula::Not(x) => {
                f.write_str("¬ ")?;
                child(x, 5, f)
            }
            Formula::And(xs) | Formula::Or(xs) => {
                let (op, p) = if matches!(form, Formula::And(_)) { (" ∧ ", 4) } else { (" ∨ ", 3) };
                if xs.is_empty() {
                    return f.write_str(if p == 4 { "⊤" } else { "⊥" });
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    // nested n-ary nodes of the same operator keep their grouping
                    child(x, p + 1, f)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                child(a, 3, f)?;
                f.write_str(" ⟶ ")?;
                child(b, 2, f)
            }
            Formula::Iff(a, b) => {
                child(a, 2, f)?;
                f.write_str(" ⟷ ")?;
                child(b, 2, f)
            }
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "props" | "prop" | "not" | "true" | "false")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Props,
    Dot,
    Comma,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    True,
    False,
}

fn lex(text: &str) -> Result<Vec<(Tok, Range<usize>)>, AdapterError> {
    const SYMBOLS: &[(&str, Tok)] = &[
        ("-->", Tok::Implies),
        ("=>", Tok::Implies),
        ("<->", Tok::Iff),
        ("<=>", Tok::Iff),
        ("/\\", Tok::And),
        ("\\/", Tok::Or),
        ("⟶", Tok::Implies),
        ("→", Tok::Implies),
        ("⟷", Tok::Iff),
        ("↔", Tok::Iff),
        ("∧", Tok::And),
        ("∨", Tok::Or),
        ("¬", Tok::Not),
        ("⊥", Tok::False),
        ("⊤", Tok::True),
        ("•", Tok::Dot),
        (".", Tok::Dot),
        (",", Tok::Comma),
        ("(", Tok::LParen),
        (")", Tok::RParen),
    ];
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("%%") {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        if rest.starts_with("%(") {
            let end = rest.find(")%").ok_or_else(|| AdapterError::new("unterminated %( label", i..text.len()))?;
            i += end + 2;
            continue;
        }
        let iri_ref = c == '<' && !rest.starts_with("<->") && !rest.starts_with("<=>");
        if c.is_alphanumeric() || c == '_' || iri_ref || c == ':' {
            let end = if c == '<' {
                i + rest.find('>').ok_or_else(|| AdapterError::new("unterminated <IRI>", i..text.len()))? + 1
            } else {
                name_end(text, i, |_| false)
            };
            let word = &text[i..end];
            let tok = match word {
                "props" | "prop" => Tok::Props,
                "not" => Tok::Not,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Name(word.to_owned()),
            };
            out.push((tok, i..end));
            i = end;
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if rest.starts_with(sym) {
                out.push((tok.clone(), i..i + sym.len()));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(AdapterError::new(format!("unexpected character `{c}`"), i..i + c.len_utf8()));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
    prefixes: &'a PrefixMap,
    declared: &'a BTreeSet<Iri>,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn span(&self) -> Range<usize> {
        self.toks.get(self.pos).map_or(self.end..self.end, |t| t.1.clone())
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, AdapterError> {
        let lhs = self.implies()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, AdapterError> {
        let lhs = self.nary(Tok::Or)?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn nary(&mut self, op: Tok) -> Result<Formula, AdapterError> {
        let next = |p: &mut Self| if op == Tok::Or { p.nary(Tok::And) } else { p.unary() };
        let first = next(self)?;
        let mut items = vec![first];
        while self.eat(&op) {
            items.push(next(self)?);
        }
        Ok(match (items.len(), op) {
            (1, _) => items.pop().unwrap(),
            (_, Tok::Or) => Formula::Or(items),
            _ => Formula::And(items),
        })
    }

    fn unary(&mut self) -> Result<Formula, AdapterError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(AdapterError::new("expected `)`", self.span()));
                }
                Ok(f)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                let iri = resolve_name(&n, self.prefixes, span.clone())?;
                if !self.declared.contains(&iri) {
                    return Err(AdapterError::new(format!("proposition `{n}` is not declared by `props`"), span));
                }
                Ok(Formula::Atom(iri))
            }
            _ => Err(AdapterError::new("expected a formula", span)),
        }
    }
}

/// Parses a whole propositional basic ontology.
pub fn parse_prop(text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
    let toks = lex(text)?;
    let mut sig = SignatureAndSentences::empty(known::iri(known::LOGIC_PROPOSITIONAL));
    let mut declared = BTreeSet::new();
    let mut i = 0;
    while i < toks.len() {
        match &toks[i].0 {
            Tok::Props => {
                i += 1;
                loop {
                    let Some((Tok::Name(n), span)) = toks.get(i) else {
                        return Err(AdapterError::new("expected a proposition name", toks.get(i).map_or(text.len()..text.len(), |t| t.1.clone())));
                    };
                    let iri = resolve_name(n, prefixes, span.clone())?;
                    declared.insert(iri.clone());
                    sig.add_entity(Entity { iri, kind: EntityKind::Proposition, declared: true })
                        .expect("one kind only");
                    i += 1;
                    if matches!(toks.get(i), Some((Tok::Comma, _))) {
                        i += 1;
                    } else {
                        break;
                    }
                }
            }
            Tok::Dot => {
                let start = toks[i].1.start;
                let end_idx = toks[i + 1..]
                    .iter()
                    .position(|t| matches!(t.0, Tok::Dot | Tok::Props))
                    .map_or(toks.len(), |p| i + 1 + p);
                let mut p = Parser {
                    toks: toks[i + 1..end_idx].to_vec(),
                    pos: 0,
                    prefixes,
                    declared: &declared,
                    end: toks.get(end_idx).map_or(text.len(), |t| t.1.start),
                };
                let f = p.iff()?;
                if p.pos != p.toks.len() {
                    return Err(AdapterError::new("unexpected token after formula", p.span()));
                }
                let end = toks[end_idx - 1].1.end;
                sig.push_sentence(SentenceForm::Prop(f), Some(start..end));
                i = end_idx;
            }
            _ => return Err(AdapterError::new("expected `props` or a `.` sentence", toks[i].1.clone())),
        }
    }
    Ok(sig)
}

/// Parses a single formula, all atoms implicitly declared.
pub fn parse_formula(text: &str, prefixes: &PrefixMap) -> Result<Formula, AdapterError> {
    let toks = lex(text)?;
    let mut declared = BTreeSet::new();
    for (t, span) in &toks {
        if let Tok::Name(n) = t {
            declared.insert(resolve_name(n, prefixes, span.clone())?);
        }
    }
    let mut p = Parser { toks, pos: 0, prefixes, declared: &declared, end: text.len() };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(AdapterError::new("unexpected token after formula", p.span()));
    }
    Ok(f)
}

pub struct PropAdapter;

impl Adapter for PropAdapter {
    fn logic(&self) -> Iri {
        known::iri(known::LOGIC_PROPOSITIONAL)
    }

    fn serialization(&self) -> Iri {
        known::iri(known::SER_PROP_HETS)
    }

    fn extract(&self, text: &str, prefixes: &PrefixMap) -> Result<SignatureAndSentences, AdapterError> {
        parse_prop(text, prefixes)
    }
}
