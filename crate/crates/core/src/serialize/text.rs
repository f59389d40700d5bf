//! DOL Text printer. Output re-parses to an equal model.

use crate::adapters::manchester::ManchesterPrinter;
use crate::iri::{Iri, PrefixMap};
use crate::model::{
    DistributedOntology, Item, Link, LinkKind, LinkPayload, LogicDeclaration, OntologyExpression, SymbolMap,
};
use crate::parser::{EXPRESSION_KEYWORDS, TOP_LEVEL_KEYWORDS};

fn word_safe(s: &str) -> bool {
    !s.is_empty()
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '{' | '}' | '(' | ')' | ',' | '=' | '"' | '<' | '>' | '↦'))
        && !s.contains("|->")
        && !s.contains("%%")
        && !s.contains("%{")
}

/// Shortest spelling of `iri` that reads back as `iri`: a bare name, a
/// CURIE, or `<iri>`.
pub fn dol_name(iri: &Iri, prefixes: &PrefixMap) -> String {
    let reads_back = |s: &str| {
        word_safe(s)
            && !EXPRESSION_KEYWORDS.contains(&s)
            && !TOP_LEVEL_KEYWORDS.contains(&s)
            && prefixes.resolve(s).ok().as_ref() == Some(iri)
    };
    let mut best: Option<String> = None;
    for (label, ns) in prefixes.iter() {
        let Some(reference) = iri.as_str().strip_prefix(ns) else { continue };
        let candidates =
            if label.is_empty() { vec![reference.to_owned(), format!(":{reference}")] } else { vec![format!("{label}:{reference}")] };
        if let Some(c) = candidates.into_iter().find(|c| reads_back(c)) {
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_else(|| format!("<{iri}>"))
}

struct Printer<'a> {
    prefixes: &'a PrefixMap,
}

impl Printer<'_> {
    fn name(&self, iri: &Iri) -> String {
        dol_name(iri, self.prefixes)
    }

    fn decl(&self, d: &LogicDeclaration) -> String {
        let mut parts = Vec::new();
        for (kw, v) in [("language", &d.language), ("logic", &d.logic), ("syntax", &d.serialization)] {
            if let Some(v) = v {
                parts.push(format!("{kw} {}", self.name(v)));
            }
        }
        parts.join(" ")
    }

    fn level(e: &OntologyExpression) -> u8 {
        match e {
            OntologyExpression::Extension(..) => 0,
            OntologyExpression::Union(..) => 1,
            OntologyExpression::Translation { .. }
            | OntologyExpression::Projection { .. }
            | OntologyExpression::ContextShift { .. } => 2,
            OntologyExpression::Reference(_) | OntologyExpression::Inline(_) => 3,
        }
    }

    fn block(&self, text: &str, indent: &str) -> String {
        if text.is_empty() {
            "{ }".to_owned()
        } else if text.contains('\n') {
            format!("{{\n{indent}  {text}\n{indent}}}")
        } else {
            format!("{{ {text} }}")
        }
    }

    fn sub(&self, e: &OntologyExpression, min: u8, indent: &str) -> String {
        if Self::level(e) < min {
            let inner = format!("{indent}  ");
            format!("{{ {} }}", self.expr(e, &inner))
        } else {
            self.expr(e, indent)
        }
    }

    fn expr(&self, e: &OntologyExpression, indent: &str) -> String {
        match e {
            OntologyExpression::Reference(i) => self.name(i),
            OntologyExpression::Inline(b) => self.block(&b.text, indent),
            OntologyExpression::Extension(a, b) => {
                format!("{}\n{indent}then {}", self.sub(a, 0, indent), self.sub(b, 1, indent))
            }
            OntologyExpression::Union(a, b) => format!("{} and {}", self.sub(a, 1, indent), self.sub(b, 2, indent)),
            OntologyExpression::Translation { base, mapping, renames } => {
                let base = self.postfix_base(base, indent);
                let map = SymbolMap { translation: mapping.clone(), renames: renames.clone() };
                format!("{base} translate with {}", self.symbol_map(&map, " "))
            }
            OntologyExpression::Projection { base, mapping } => {
                format!("{} project with {}", self.postfix_base(base, indent), self.name(mapping))
            }
            OntologyExpression::ContextShift { decl, inner } => {
                format!("{} : {}", self.decl(decl), self.sub(inner, 2, indent))
            }
        }
    }

    /// A context shift would swallow the postfix operator, so it is braced.
    fn postfix_base(&self, e: &OntologyExpression, indent: &str) -> String {
        match e {
            OntologyExpression::ContextShift { .. } => format!("{{ {} }}", self.expr(e, &format!("{indent}  "))),
            _ => self.sub(e, 2, indent),
        }
    }

    fn symbol_map(&self, m: &SymbolMap, sep: &str) -> String {
        let renames: Vec<String> = m.renames.iter().map(|r| format!("{} ↦ {}", self.name(&r.from), self.name(&r.to))).collect();
        match (&m.translation, renames.is_empty()) {
            (Some(t), true) => self.name(t),
            (Some(t), false) => format!("{},{sep}{}", self.name(t), renames.join(", ")),
            (None, _) => renames.join(", "),
        }
    }

    fn link(&self, l: &Link) -> String {
        let kw = match l.kind {
            LinkKind::Alignment => "alignment",
            _ => "interpretation",
        };
        let mut out = format!(
            "{kw} {} : {} to {}",
            self.name(&l.iri),
            self.sub(&l.source, 0, "  "),
            self.sub(&l.target, 0, "  ")
        );
        match &l.payload {
            LinkPayload::SymbolMap(m) if m.translation.is_none() && m.renames.is_empty() => {}
            LinkPayload::SymbolMap(m) if m.translation.is_some() => {
                out.push_str(&format!(" =\n  translate with {}", self.symbol_map(m, "\n  ")));
            }
            LinkPayload::SymbolMap(m) => out.push_str(&format!(" =\n  {}", self.symbol_map(m, " "))),
            LinkPayload::Correspondences(c) if c.entries.is_empty() => {}
            LinkPayload::Correspondences(c) => {
                let p = ManchesterPrinter { prefixes: self.prefixes, local_names: false };
                let entries: Vec<String> =
                    c.entries.iter().map(|e| format!("  {} = {}", self.name(&e.left), p.class_expr(&e.right))).collect();
                out.push_str(&format!(" =\n{}", entries.join(",\n")));
            }
        }
        out
    }
}

/// Prints a document as DOL Text.
pub fn print_text(doc: &DistributedOntology) -> String {
    let p = Printer { prefixes: &doc.prefixes };
    let mut out = String::new();
    if !doc.prefixes.is_empty() {
        let width = doc.prefixes.iter().map(|(l, _)| l.len() + 1).max().unwrap_or(0);
        let lines: Vec<String> =
            doc.prefixes.iter().map(|(l, ns)| format!("{:width$} <{ns}>", format!("{l}:"))).collect();
        out.push_str(&format!("%prefix( {} )%\n\n", lines.join("\n         ")));
    }
    if let Some(iri) = &doc.iri {
        out.push_str(&format!("distributed-ontology {}\n", p.name(iri)));
    }
    let mut after_logic = false;
    for item in &doc.items {
        if !after_logic && !out.is_empty() {
            out.push('\n');
        }
        after_logic = false;
        match item {
            Item::Logic(d) => {
                out.push_str(&p.decl(d));
                after_logic = true;
            }
            Item::Definition(d) => {
                out.push_str(&format!("ontology {} =\n  ", p.name(&d.iri)));
                match &d.body {
                    OntologyExpression::Inline(b) if !b.text.is_empty() => out.push_str(&b.text),
                    body => out.push_str(&p.expr(body, "  ")),
                }
            }
            Item::Link(l) => out.push_str(&p.link(l)),
        }
        out.push('\n');
    }
    out
}
