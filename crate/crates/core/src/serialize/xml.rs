//! DOL XML: writer, schema validator and reader.
//!
//! The element vocabulary is this crate's own: one element per production
//! of the abstract syntax, IRIs in attributes. `schema/dol-xml.json` is the
//! grammar; [`validate_xml`] checks documents against it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::adapters::manchester::{parse_class_expression, ManchesterPrinter};
use crate::iri::{Iri, PrefixMap};
use crate::model::{
    BasicOntologyBlock, Correspondence, CorrespondenceList, CorrespondenceRelation, DistributedOntology, Item, Link,
    LinkKind, LinkPayload, LogicDeclaration, OntologyDefinition, OntologyExpression, SymbolMap, SymbolRename,
};

pub const XML_NS: &str = "http://purl.net/dol/1.0/xml#";

/// The shipped element grammar.
pub const XML_SCHEMA: &str = include_str!("../../schema/dol-xml.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct XmlError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

fn escape(s: &str, attr: bool) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attr => out.push_str("&quot;"),
            '\n' if attr => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' if attr => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

struct Writer {
    out: String,
    pretty: bool,
    depth: usize,
}

impl Writer {
    fn indent(&mut self) {
        if self.pretty {
            for _ in 0..self.depth {
                self.out.push_str("  ");
            }
        }
    }

    fn newline(&mut self) {
        if self.pretty {
            self.out.push('\n');
        }
    }

    fn attrs(&mut self, attrs: &[(&str, Option<&str>)]) {
        for (k, v) in attrs {
            if let Some(v) = v {
                let _ = write!(self.out, " {k}=\"{}\"", escape(v, true));
            }
        }
    }

    fn open(&mut self, name: &str, attrs: &[(&str, Option<&str>)]) {
        self.indent();
        let _ = write!(self.out, "<{name}");
        self.attrs(attrs);
        self.out.push('>');
        self.newline();
        self.depth += 1;
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.indent();
        let _ = write!(self.out, "</{name}>");
        self.newline();
    }

    fn empty(&mut self, name: &str, attrs: &[(&str, Option<&str>)]) {
        self.indent();
        let _ = write!(self.out, "<{name}");
        self.attrs(attrs);
        self.out.push_str("/>");
        self.newline();
    }

    fn text(&mut self, name: &str, attrs: &[(&str, Option<&str>)], text: &str) {
        self.indent();
        let _ = write!(self.out, "<{name}");
        self.attrs(attrs);
        let _ = write!(self.out, ">{}</{name}>", escape(text, false));
        self.newline();
    }

    fn decl_attrs(d: &LogicDeclaration) -> [(&'static str, Option<&str>); 3] {
        [
            ("language", d.language.as_ref().map(Iri::as_str)),
            ("logic", d.logic.as_ref().map(Iri::as_str)),
            ("serialization", d.serialization.as_ref().map(Iri::as_str)),
        ]
    }

    fn renames(&mut self, rs: &[SymbolRename]) {
        for r in rs {
            self.empty("Rename", &[("from", Some(r.from.as_str())), ("to", Some(r.to.as_str()))]);
        }
    }

    fn expr(&mut self, e: &OntologyExpression) {
        match e {
            OntologyExpression::Reference(i) => self.empty("Reference", &[("iri", Some(i.as_str()))]),
            OntologyExpression::Inline(b) => self.text("BasicOntology", &Self::decl_attrs(&b.decl), &b.text),
            OntologyExpression::Extension(a, b) | OntologyExpression::Union(a, b) => {
                let name = if matches!(e, OntologyExpression::Extension(..)) { "Extension" } else { "Union" };
                self.open(name, &[]);
                self.expr(a);
                self.expr(b);
                self.close(name);
            }
            OntologyExpression::Translation { base, mapping, renames } => {
                self.open("Translation", &[("mapping", mapping.as_ref().map(Iri::as_str))]);
                self.expr(base);
                self.renames(renames);
                self.close("Translation");
            }
            OntologyExpression::Projection { base, mapping } => {
                self.open("Projection", &[("mapping", Some(mapping.as_str()))]);
                self.expr(base);
                self.close("Projection");
            }
            OntologyExpression::ContextShift { decl, inner } => {
                self.open("ContextShift", &Self::decl_attrs(decl));
                self.expr(inner);
                self.close("ContextShift");
            }
        }
    }

    fn link(&mut self, l: &Link) {
        let name = link_element(l.kind);
        self.open(name, &[("iri", Some(l.iri.as_str()))]);
        self.open("Source", &[]);
        self.expr(&l.source);
        self.close("Source");
        self.open("Target", &[]);
        self.expr(&l.target);
        self.close("Target");
        match &l.payload {
            LinkPayload::SymbolMap(m) => {
                let attrs = [("translation", m.translation.as_ref().map(Iri::as_str))];
                if m.renames.is_empty() {
                    self.empty("SymbolMap", &attrs);
                } else {
                    self.open("SymbolMap", &attrs);
                    self.renames(&m.renames);
                    self.close("SymbolMap");
                }
            }
            LinkPayload::Correspondences(c) => {
                let empty = PrefixMap::new();
                let p = ManchesterPrinter { prefixes: &empty, local_names: false };
                for e in &c.entries {
                    self.open("Correspondence", &[("entity", Some(e.left.as_str())), ("relation", Some(e.relation.as_str()))]);
                    self.text("Term", &[], &p.class_expr(&e.right));
                    self.close("Correspondence");
                }
            }
        }
        self.close(name);
    }
}

fn link_element(kind: LinkKind) -> &'static str {
    match kind {
        LinkKind::Interpretation => "Interpretation",
        LinkKind::Alignment => "Alignment",
        LinkKind::Import => "Import",
        LinkKind::ConservativeExtensionClaim => "ConservativeExtensionClaim",
        LinkKind::DefinitionalExtensionClaim => "DefinitionalExtensionClaim",
    }
}

/// Writes DOL XML.
pub fn write_xml(doc: &DistributedOntology, pretty: bool) -> String {
    let mut w = Writer { out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>"), pretty, depth: 0 };
    w.newline();
    w.indent();
    let _ = write!(w.out, "<DistributedOntology xmlns=\"{XML_NS}\"");
    w.attrs(&[("iri", doc.iri.as_ref().map(Iri::as_str))]);
    w.out.push('>');
    w.newline();
    w.depth += 1;
    for (label, ns) in doc.prefixes.iter() {
        w.empty("Prefix", &[("label", Some(label)), ("namespace", Some(ns))]);
    }
    for item in &doc.items {
        match item {
            Item::Logic(d) => w.empty("LogicDeclaration", &Writer::decl_attrs(d)),
            Item::Definition(d) => {
                w.open("Ontology", &[("iri", Some(d.iri.as_str()))]);
                w.expr(&d.body);
                w.close("Ontology");
            }
            Item::Link(l) => w.link(l),
        }
    }
    w.close("DistributedOntology");
    if !pretty {
        w.out.push('\n');
    }
    w.out
}

// ---- schema ---------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Schema {
    namespace: String,
    root: String,
    groups: BTreeMap<String, Vec<String>>,
    elements: BTreeMap<String, ElementDef>,
    #[serde(default)]
    macros: BTreeMap<String, Vec<Particle>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDef {
    #[serde(default)]
    attributes: BTreeMap<String, AttrDef>,
    #[serde(default)]
    content: Content,
    #[serde(default)]
    text: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttrDef {
    #[serde(rename = "type")]
    ty: String,
    required: bool,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Content {
    Particles(Vec<Particle>),
    Macro(String),
}

impl Default for Content {
    fn default() -> Self {
        Content::Particles(Vec::new())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Particle {
    element: Option<String>,
    group: Option<String>,
    #[serde(default)]
    min: usize,
    /// Unbounded when absent.
    max: Option<usize>,
}

fn schema() -> &'static Schema {
    static SCHEMA: OnceLock<Schema> = OnceLock::new();
    SCHEMA.get_or_init(|| serde_json::from_str(XML_SCHEMA).expect("shipped schema is valid"))
}

fn pos(doc: &roxmltree::Document<'_>, node: roxmltree::Node<'_, '_>) -> (u32, u32) {
    let p = doc.text_pos_at(node.range().start);
    (p.row, p.col)
}

/// Checks a document against the shipped schema; returns every violation.
pub fn validate_xml(text: &str) -> Result<(), Vec<XmlError>> {
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let p = e.pos();
        vec![XmlError { message: e.to_string(), line: p.row, column: p.col }]
    })?;
    let s = schema();
    let mut errors = Vec::new();
    let root = doc.root_element();
    let mut report = |node: roxmltree::Node<'_, '_>, message: String| {
        let (line, column) = pos(&doc, node);
        errors.push(XmlError { message, line, column });
    };
    if root.tag_name().name() != s.root {
        report(root, format!("root element must be <{}>", s.root));
    }
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let name = node.tag_name().name();
        if node.tag_name().namespace() != Some(s.namespace.as_str()) {
            report(node, format!("<{name}> is not in the namespace {}", s.namespace));
        }
        let Some(def) = s.elements.get(name) else {
            report(node, format!("unknown element <{name}>"));
            continue;
        };
        for a in node.attributes() {
            if a.namespace().is_some() {
                continue;
            }
            match def.attributes.get(a.name()) {
                None => report(node, format!("<{name}> has no attribute `{}`", a.name())),
                Some(ad) => {
                    let ok = match ad.ty.as_str() {
                        "iri" => Iri::parse(a.value()).is_ok(),
                        "relation" => CorrespondenceRelation::parse(a.value()).is_some(),
                        _ => true,
                    };
                    if !ok {
                        report(node, format!("attribute `{}` of <{name}> is not a valid {}", a.name(), ad.ty));
                    }
                }
            }
        }
        for (an, ad) in &def.attributes {
            if ad.required && node.attribute(an.as_str()).is_none() {
                report(node, format!("<{name}> needs attribute `{an}`"));
            }
        }
        if !def.text {
            if let Some(t) = node.children().find(|c| c.is_text() && !c.text().unwrap_or("").trim().is_empty()) {
                report(t, format!("<{name}> may not contain text"));
            }
        }
        let particles: &[Particle] = match &def.content {
            Content::Particles(p) => p,
            Content::Macro(m) => {
                s.macros.get(m.trim_start_matches('$')).map(Vec::as_slice).expect("schema macros are defined")
            }
        };
        let children: Vec<roxmltree::Node<'_, '_>> = node.children().filter(|c| c.is_element()).collect();
        let matches = |p: &Particle, n: &str| match (&p.element, &p.group) {
            (Some(e), _) => e == n,
            (None, Some(g)) => s.groups.get(g).is_some_and(|g| g.iter().any(|x| x == n)),
            _ => false,
        };
        let mut i = 0;
        for p in particles {
            let mut count = 0;
            while i < children.len() && p.max.is_none_or(|m| count < m) && matches(p, children[i].tag_name().name()) {
                count += 1;
                i += 1;
            }
            if count < p.min {
                let what = p.element.clone().or_else(|| p.group.clone().map(|g| format!("{g} element"))).unwrap_or_default();
                report(node, format!("<{name}> needs at least {} {what} child(ren), found {count}", p.min));
            }
        }
        if let Some(extra) = children.get(i) {
            report(*extra, format!("unexpected <{}> inside <{name}>", extra.tag_name().name()));
        }
        stack.extend(children.into_iter().rev());
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

// ---- reader ---------------------------------------------------------------

struct Reader<'a, 'input> {
    doc: &'a roxmltree::Document<'input>,
}

type Node<'a, 'input> = roxmltree::Node<'a, 'input>;

impl<'a, 'input> Reader<'a, 'input> {
    fn err<T>(&self, node: Node<'a, 'input>, message: impl Into<String>) -> Result<T, XmlError> {
        let (line, column) = pos(self.doc, node);
        Err(XmlError { message: message.into(), line, column })
    }

    fn iri_attr(&self, node: Node<'a, 'input>, name: &str) -> Result<Option<Iri>, XmlError> {
        match node.attribute(name) {
            None => Ok(None),
            Some(v) => match Iri::parse(v) {
                Ok(i) => Ok(Some(i)),
                Err(e) => self.err(node, e.to_string()),
            },
        }
    }

    fn required(&self, node: Node<'a, 'input>, name: &str) -> Result<Iri, XmlError> {
        match self.iri_attr(node, name)? {
            Some(i) => Ok(i),
            None => self.err(node, format!("<{}> needs `{name}`", node.tag_name().name())),
        }
    }

    fn decl(&self, node: Node<'a, 'input>) -> Result<LogicDeclaration, XmlError> {
        Ok(LogicDeclaration {
            language: self.iri_attr(node, "language")?,
            logic: self.iri_attr(node, "logic")?,
            serialization: self.iri_attr(node, "serialization")?,
        })
    }

    fn elements(node: Node<'a, 'input>) -> Vec<Node<'a, 'input>> {
        node.children().filter(|c| c.is_element()).collect()
    }

    fn text(node: Node<'a, 'input>) -> String {
        node.children().filter(|c| c.is_text()).filter_map(|c| c.text()).collect()
    }

    fn renames(&self, nodes: &[Node<'a, 'input>]) -> Result<Vec<SymbolRename>, XmlError> {
        nodes
            .iter()
            .map(|n| {
                if n.tag_name().name() != "Rename" {
                    return self.err(*n, "expected <Rename>");
                }
                Ok(SymbolRename { from: self.required(*n, "from")?, to: self.required(*n, "to")? })
            })
            .collect()
    }

    fn one_expr(&self, node: Node<'a, 'input>) -> Result<OntologyExpression, XmlError> {
        match Self::elements(node).first() {
            Some(c) => self.expr(*c),
            None => self.err(node, format!("<{}> needs an expression", node.tag_name().name())),
        }
    }

    fn expr(&self, node: Node<'a, 'input>) -> Result<OntologyExpression, XmlError> {
        let kids = Self::elements(node);
        Ok(match node.tag_name().name() {
            "Reference" => OntologyExpression::Reference(self.required(node, "iri")?),
            "BasicOntology" => OntologyExpression::Inline(BasicOntologyBlock::new(self.decl(node)?, Self::text(node))),
            n @ ("Extension" | "Union") => {
                let [a, b] = kids.as_slice() else { return self.err(node, format!("<{n}> needs two expressions")) };
                let (a, b) = (Box::new(self.expr(*a)?), Box::new(self.expr(*b)?));
                if n == "Extension" {
                    OntologyExpression::Extension(a, b)
                } else {
                    OntologyExpression::Union(a, b)
                }
            }
            "Translation" => {
                let Some((first, rest)) = kids.split_first() else { return self.err(node, "<Translation> needs a base") };
                OntologyExpression::Translation {
                    base: Box::new(self.expr(*first)?),
                    mapping: self.iri_attr(node, "mapping")?,
                    renames: self.renames(rest)?,
                }
            }
            "Projection" => {
                OntologyExpression::Projection { base: Box::new(self.one_expr(node)?), mapping: self.required(node, "mapping")? }
            }
            "ContextShift" => {
                OntologyExpression::ContextShift { decl: self.decl(node)?, inner: Box::new(self.one_expr(node)?) }
            }
            other => return self.err(node, format!("<{other}> is not an expression")),
        })
    }

    fn link(&self, node: Node<'a, 'input>, kind: LinkKind) -> Result<Link, XmlError> {
        let kids = Self::elements(node);
        let part = |name: &str| kids.iter().find(|k| k.tag_name().name() == name).copied();
        let (Some(s), Some(t)) = (part("Source"), part("Target")) else {
            return self.err(node, "a link needs <Source> and <Target>");
        };
        let payload = if kind == LinkKind::Alignment {
            let mut entries = Vec::new();
            for c in kids.iter().filter(|k| k.tag_name().name() == "Correspondence") {
                let relation = c
                    .attribute("relation")
                    .and_then(CorrespondenceRelation::parse)
                    .map_or_else(|| self.err(*c, "bad `relation`"), Ok)?;
                let Some(term) = Self::elements(*c).into_iter().find(|k| k.tag_name().name() == "Term") else {
                    return self.err(*c, "<Correspondence> needs a <Term>");
                };
                let right = match parse_class_expression(&Self::text(term), &PrefixMap::new()) {
                    Ok(r) => r,
                    Err(e) => return self.err(term, e.message),
                };
                entries.push(Correspondence { left: self.required(*c, "entity")?, relation, right });
            }
            LinkPayload::Correspondences(CorrespondenceList { entries })
        } else {
            let Some(m) = part("SymbolMap") else { return self.err(node, "missing <SymbolMap>") };
            LinkPayload::SymbolMap(SymbolMap {
                translation: self.iri_attr(m, "translation")?,
                renames: self.renames(&Self::elements(m))?,
            })
        };
        Ok(Link { iri: self.required(node, "iri")?, kind, source: self.one_expr(s)?, target: self.one_expr(t)?, payload })
    }
}

/// Reads DOL XML back into the model.
pub fn read_xml(text: &str) -> Result<DistributedOntology, XmlError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let p = e.pos();
        XmlError { message: e.to_string(), line: p.row, column: p.col }
    })?;
    let r = Reader { doc: &doc };
    let root = doc.root_element();
    if root.tag_name().name() != "DistributedOntology" {
        return r.err(root, "root element must be <DistributedOntology>");
    }
    let mut out = DistributedOntology { iri: r.iri_attr(root, "iri")?, ..Default::default() };
    for node in Reader::elements(root) {
        let name = node.tag_name().name();
        match name {
            "Prefix" => {
                let (Some(l), Some(ns)) = (node.attribute("label"), node.attribute("namespace")) else {
                    return r.err(node, "<Prefix> needs `label` and `namespace`");
                };
                out.prefixes.bind(l, ns);
            }
            "LogicDeclaration" => out.items.push(Item::Logic(r.decl(node)?)),
            "Ontology" => out.items.push(Item::Definition(OntologyDefinition { iri: r.required(node, "iri")?, body: r.one_expr(node)? })),
            "Interpretation" => out.items.push(Item::Link(r.link(node, LinkKind::Interpretation)?)),
            "Alignment" => out.items.push(Item::Link(r.link(node, LinkKind::Alignment)?)),
            "Import" => out.items.push(Item::Link(r.link(node, LinkKind::Import)?)),
            "ConservativeExtensionClaim" => out.items.push(Item::Link(r.link(node, LinkKind::ConservativeExtensionClaim)?)),
            "DefinitionalExtensionClaim" => out.items.push(Item::Link(r.link(node, LinkKind::DefinitionalExtensionClaim)?)),
            other => return r.err(node, format!("unexpected <{other}>")),
        }
    }
    Ok(out)
}
