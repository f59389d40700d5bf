//! Parser for the DOL Text serialization.
//!
//! A document is an optional `%prefix( … )%` block, a `distributed-ontology`
//! header and a sequence of items. Items start at lines whose first word,
//! at brace depth zero, is a top-level keyword; everything up to the next
//! such line belongs to the item. This lets embedded basic ontologies run
//! verbatim without knowing their syntax. A malformed item is reported and
//! skipped; parsing resumes at the next item.

use std::fmt::Write as _;
use std::ops::Range;

use crate::adapters::manchester::{parse_class_expression, ManchesterPrinter};
use crate::diagnostics::{Diagnostic, LineIndex, Severity, SourceSpan};
use crate::iri::{is_curie_reference, is_prefix_label, Curie, Iri, PrefixMap};
use crate::model::{
    BasicOntologyBlock, Correspondence, CorrespondenceList, CorrespondenceRelation, DistributedOntology, Item, Link,
    LinkKind, LinkPayload, LogicDeclaration, OntologyDefinition, OntologyExpression, SymbolMap, SymbolRename,
};

/// Words that start an item when they open a line at brace depth zero.
pub const TOP_LEVEL_KEYWORDS: &[&str] =
    &["distributed-ontology", "logic", "language", "syntax", "ontology", "interpretation", "alignment"];

/// Words that can never be ontology names inside expressions.
pub const EXPRESSION_KEYWORDS: &[&str] = &["then", "and", "translate", "project", "with", "to", "language", "logic", "syntax"];

/// Source positions of a parsed document. `items[i]` and `blocks[i]` belong
/// to `document.items[i]`; blocks are listed in [`OntologyExpression::blocks`]
/// order, source expression before target for links.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub prefix_block: Option<Range<usize>>,
    pub header: Option<Range<usize>>,
    pub items: Vec<Range<usize>>,
    pub blocks: Vec<Vec<Range<usize>>>,
    pub lines: LineIndex,
}

impl SourceMap {
    pub fn span(&self, range: Range<usize>) -> SourceSpan {
        self.lines.span(range)
    }

    pub fn block(&self, item: usize, ordinal: usize) -> Option<Range<usize>> {
        self.blocks.get(item)?.get(ordinal).cloned()
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub document: DistributedOntology,
    pub diagnostics: Vec<Diagnostic>,
    pub source_map: SourceMap,
}

impl Parsed {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Parses a whole DOL Text document.
pub fn parse_document(text: &str) -> Parsed {
    let mut p = DocParser {
        text,
        lines: LineIndex::new(text),
        diagnostics: Vec::new(),
        doc: DistributedOntology::default(),
        map: SourceMap::default(),
        context: LogicDeclaration::default(),
    };
    p.run();
    p.map.lines = p.lines;
    Parsed { document: p.doc, diagnostics: p.diagnostics, source_map: p.map }
}

/// Parses a standalone ontology expression. Bodies that are not expressions
/// are not accepted here; this entry point is for expression text only.
pub fn parse_ontology_expression(
    text: &str,
    prefixes: &PrefixMap,
    context: &LogicDeclaration,
) -> Result<OntologyExpression, Vec<Diagnostic>> {
    let lines = LineIndex::new(text);
    let diag = |code, msg: String, range: Range<usize>| Diagnostic::new(Severity::Error, code, msg, Some(lines.span(range)));
    let toks = tokenize(text, 0..text.len()).map_err(|e| vec![diag(e.code, e.message, e.span)])?;
    let mut ep = ExprParser::new(text, toks, text.len(), prefixes, context.clone());
    ep.committed = true;
    let result = ep.expr().and_then(|e| ep.expect_end().map(|_| e));
    match result {
        Ok(e) if ep.name_errors.is_empty() => Ok(e),
        Ok(_) => Err(ep.name_errors.into_iter().map(|(m, r)| diag("E102", m, r)).collect()),
        Err(f) => Err(vec![diag("E106", f.message, f.span)]),
    }
}

struct DocParser<'s> {
    text: &'s str,
    lines: LineIndex,
    diagnostics: Vec<Diagnostic>,
    doc: DistributedOntology,
    map: SourceMap,
    context: LogicDeclaration,
}

impl<'s> DocParser<'s> {
    fn error(&mut self, code: &'static str, message: impl Into<String>, range: Range<usize>) {
        let span = self.lines.span(range);
        self.diagnostics.push(Diagnostic::new(Severity::Error, code, message, Some(span)));
    }

    fn run(&mut self) {
        let mut pos = match skip_trivia(self.text, 0) {
            Ok(p) => p,
            Err(at) => {
                self.error("E109", "unterminated `%{` comment", at..self.text.len());
                return;
            }
        };
        if self.text[pos..].starts_with("%prefix(") {
            pos = self.prefix_block(pos);
        }
        let segmented = segment(self.text, pos);
        for (code, message, range) in segmented.errors {
            self.error(code, message, range);
        }
        for seg in segmented.items {
            self.item(seg);
        }
        if self.doc.iri.is_none() && !self.diagnostics.iter().any(|d| d.code == "E108") {
            self.diagnostics.push(Diagnostic::new(Severity::Warning, "W101", "no distributed-ontology header", None));
        }
    }

    fn prefix_block(&mut self, start: usize) -> usize {
        let text = self.text;
        let mut pos = start + "%prefix(".len();
        loop {
            pos = match skip_trivia(text, pos) {
                Ok(p) => p,
                Err(at) => {
                    self.error("E109", "unterminated `%{` comment", at..text.len());
                    return text.len();
                }
            };
            let rest = &text[pos..];
            if rest.starts_with(")%") {
                self.map.prefix_block = Some(start..pos + 2);
                return pos + 2;
            }
            if rest.is_empty() {
                self.error("E101", "prefix block is not closed with `)%`", start..text.len());
                self.map.prefix_block = Some(start..text.len());
                return text.len();
            }
            match parse_binding(text, pos) {
                Ok((label, iri, end)) => {
                    if self.doc.prefixes.bind(label.clone(), iri).is_some() {
                        self.error("E101", format!("prefix `{label}:` is bound twice"), pos..end);
                    }
                    pos = end;
                }
                Err((message, range)) => {
                    self.error("E101", message, range);
                    // resynchronise after the next `>` or at the block end
                    let skip = text[pos..].find(['>', '\n']).map_or(text.len(), |i| pos + i + 1);
                    pos = match text[pos..].find(")%") {
                        Some(close) if pos + close < skip => pos + close,
                        _ => skip,
                    };
                }
            }
        }
    }

    fn item(&mut self, seg: Segment) {
        let Segment { keyword, range } = seg;
        let toks = match tokenize(self.text, range.clone()) {
            Ok(t) => t,
            Err(e) => {
                self.error(e.code, e.message, e.span);
                return;
            }
        };
        let prefixes = self.doc.prefixes.clone();
        let mut ep = ExprParser::new(self.text, toks, range.end, &prefixes, self.context.clone());
        ep.committed = true;
        ep.pos = 1;
        let parsed = match keyword {
            "distributed-ontology" => {
                self.header(&mut ep, range);
                return;
            }
            "logic" | "language" | "syntax" => {
                ep.pos = 0;
                ep.decl().and_then(|d| {
                    ep.expect_end()?;
                    Ok(ItemValue::Logic(d))
                })
            }
            "ontology" => definition(&mut ep, self.text, range.clone()),
            "interpretation" => interpretation(&mut ep),
            "alignment" => alignment(&mut ep, self.text, range.clone()),
            _ => unreachable!("segment keywords are top-level keywords"),
        };
        let value = match parsed {
            Ok(v) => v,
            Err(f) => {
                self.error(f.code, f.message, f.span);
                return;
            }
        };
        if !ep.name_errors.is_empty() {
            for (m, r) in std::mem::take(&mut ep.name_errors) {
                self.error("E102", m, r);
            }
            return;
        }
        let blocks = std::mem::take(&mut ep.blocks);
        let item = match value {
            ItemValue::Logic(d) => {
                self.context = d.clone();
                Item::Logic(d)
            }
            ItemValue::Definition(d) => Item::Definition(d),
            ItemValue::Link(l) => Item::Link(l),
        };
        let iri = match &item {
            Item::Definition(d) => Some(d.iri.clone()),
            Item::Link(l) => Some(l.iri.clone()),
            Item::Logic(_) => None,
        };
        if let Some(iri) = iri {
            let taken = self.doc.items.iter().any(|i| match i {
                Item::Definition(d) => d.iri == iri,
                Item::Link(l) => l.iri == iri,
                Item::Logic(_) => false,
            });
            if taken {
                self.error("E107", format!("<{iri}> is already defined in this document"), range);
                return;
            }
        }
        self.doc.items.push(item);
        self.map.items.push(range);
        self.map.blocks.push(blocks);
    }

    fn header(&mut self, ep: &mut ExprParser<'_>, range: Range<usize>) {
        if self.doc.iri.is_some() || !self.doc.items.is_empty() {
            self.error("E108", "`distributed-ontology` must come once, before every other item", range);
            return;
        }
        let result = ep.name().and_then(|iri| ep.expect_end().map(|_| iri));
        match result {
            Ok(iri) if ep.name_errors.is_empty() => {
                self.doc.iri = Some(iri);
                self.map.header = Some(range);
            }
            Ok(_) => {
                for (m, r) in std::mem::take(&mut ep.name_errors) {
                    self.error("E102", m, r);
                }
            }
            Err(f) => self.error("E105", f.message, f.span),
        }
    }
}

enum ItemValue {
    Logic(LogicDeclaration),
    Definition(OntologyDefinition),
    Link(Link),
}

fn definition(ep: &mut ExprParser<'_>, text: &str, range: Range<usize>) -> Result<ItemValue, Fail> {
    let iri = ep.name().map_err(|f| f.code("E105"))?;
    let eq = ep.expect(TokKind::Eq, "`=` after the ontology name").map_err(|f| f.code("E105"))?;
    let body_start = eq.end;
    if ep.at_end() {
        return Err(Fail::new("E105", "expected an ontology body after `=`", eq));
    }
    // Try the body as an expression first; fall back to a verbatim block.
    let checkpoint = ep.pos;
    ep.committed = false;
    match ep.expr().and_then(|e| ep.expect_end().map(|_| e)) {
        Ok(body) => Ok(ItemValue::Definition(OntologyDefinition { iri, body })),
        Err(f) if f.committed => Err(f),
        Err(_) => {
            ep.pos = checkpoint;
            ep.blocks.clear();
            ep.name_errors.clear();
            let block = trimmed(text, body_start..range.end);
            ep.blocks.push(block.clone());
            let b = BasicOntologyBlock::new(ep.ctx.clone(), &text[block]);
            Ok(ItemValue::Definition(OntologyDefinition { iri, body: OntologyExpression::Inline(b) }))
        }
    }
}

fn interpretation(ep: &mut ExprParser<'_>) -> Result<ItemValue, Fail> {
    let iri = ep.name().map_err(|f| f.code("E105"))?;
    ep.eat(TokKind::Colon);
    let source = ep.expr()?;
    ep.expect_word("to")?;
    let target = ep.expr()?;
    let mut map = SymbolMap::default();
    if ep.eat(TokKind::Eq).is_some() {
        if ep.peek_word("translate") && ep.peek_word_at(1, "with") {
            ep.pos += 2;
            map = ep.after_translate_with()?;
        } else {
            map.renames = ep.renames()?;
        }
    }
    ep.expect_end()?;
    Ok(ItemValue::Link(Link { iri, kind: LinkKind::Interpretation, source, target, payload: LinkPayload::SymbolMap(map) }))
}

fn alignment(ep: &mut ExprParser<'_>, text: &str, range: Range<usize>) -> Result<ItemValue, Fail> {
    let iri = ep.name().map_err(|f| f.code("E105"))?;
    ep.expect(TokKind::Colon, "`:` after the alignment name")?;
    let source = ep.expr()?;
    ep.expect_word("to")?;
    let target = ep.expr()?;
    let mut entries = Vec::new();
    if let Some(eq) = ep.eat(TokKind::Eq) {
        entries = correspondences(text, eq.end..range.end, ep.prefixes)?;
    } else {
        ep.expect_end()?;
    }
    Ok(ItemValue::Link(Link {
        iri,
        kind: LinkKind::Alignment,
        source,
        target,
        payload: LinkPayload::Correspondences(CorrespondenceList { entries }),
    }))
}

/// `left = class-expression, …` with an optional trailing comma.
fn correspondences(text: &str, range: Range<usize>, prefixes: &PrefixMap) -> Result<Vec<Correspondence>, Fail> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = range.start;
    for (i, c) in text[range.clone()].char_indices() {
        let at = range.start + i;
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push(start..at);
                start = at + 1;
            }
            _ => {}
        }
    }
    pieces.push(start..range.end);
    let last = pieces.len() - 1;
    let mut out = Vec::new();
    for (n, piece) in pieces.into_iter().enumerate() {
        let piece = trimmed(text, piece);
        if piece.is_empty() {
            if n == last && n > 0 {
                continue;
            }
            return Err(Fail::new("E110", "empty correspondence", piece.start..piece.start + 1));
        }
        let src = &text[piece.clone()];
        let Some(eq) = src.find('=') else {
            return Err(Fail::new("E110", "correspondence needs `entity = term`", piece));
        };
        let left_range = trimmed(text, piece.start..piece.start + eq);
        let left = prefixes
            .resolve(&text[left_range.clone()])
            .map_err(|e| Fail::new("E102", e.to_string(), left_range.clone()))?;
        let right_start = piece.start + eq + 1;
        let right = parse_class_expression(&text[right_start..piece.end], prefixes).map_err(|e| {
            Fail::new("E110", e.message, right_start + e.span.start..right_start + e.span.end.max(e.span.start))
        })?;
        out.push(Correspondence { left, relation: CorrespondenceRelation::Equivalence, right });
    }
    Ok(out)
}

fn trimmed(text: &str, range: Range<usize>) -> Range<usize> {
    let s = &text[range.clone()];
    let lead = s.len() - s.trim_start().len();
    let trail = s.len() - s.trim_end().len();
    if lead == s.len() {
        return range.start..range.start;
    }
    range.start + lead..range.end - trail
}

/// Skips whitespace and comments. `Err` carries the start of an unterminated
/// `%{` comment.
fn skip_trivia(text: &str, mut pos: usize) -> Result<usize, usize> {
    loop {
        let rest = &text[pos..];
        let trimmed = rest.trim_start();
        pos += rest.len() - trimmed.len();
        match comment_end(text, pos) {
            Some(Ok(end)) => pos = end,
            Some(Err(())) => return Err(pos),
            None => return Ok(pos),
        }
    }
}

/// End of the comment starting at `pos`, if one starts there.
fn comment_end(text: &str, pos: usize) -> Option<Result<usize, ()>> {
    let rest = &text[pos..];
    if rest.starts_with("%%") {
        Some(Ok(rest.find('\n').map_or(text.len(), |i| pos + i)))
    } else if let Some(body) = rest.strip_prefix("%{") {
        Some(body.find("}%").map(|i| pos + 2 + i + 2).ok_or(()))
    } else {
        None
    }
}

/// End of a double-quoted string starting at `pos`; strings stop at the
/// end of the line if unterminated.
fn string_end(text: &str, pos: usize) -> usize {
    let mut escaped = false;
    for (i, c) in text[pos + 1..].char_indices() {
        match c {
            '\\' if !escaped => escaped = true,
            '"' if !escaped => return pos + 1 + i + 1,
            '\n' => return pos + 1 + i,
            _ => escaped = false,
        }
    }
    text.len()
}

fn parse_binding(text: &str, pos: usize) -> Result<(String, String, usize), (String, Range<usize>)> {
    let rest = &text[pos..];
    let colon = rest
        .find(|c: char| c == ':' || c.is_whitespace())
        .filter(|&i| rest[i..].starts_with(':'))
        .ok_or_else(|| ("expected `label: <iri>` in the prefix block".to_owned(), pos..pos + 1))?;
    let label = &rest[..colon];
    if !is_prefix_label(label) {
        return Err((format!("`{label}` is not a valid prefix label"), pos..pos + colon));
    }
    let after = pos + colon + 1;
    let iri_start = after + (text[after..].len() - text[after..].trim_start().len());
    if !text[iri_start..].starts_with('<') {
        return Err((format!("expected `<iri>` after `{label}:`"), iri_start..iri_start + 1));
    }
    let close = text[iri_start..]
        .find(['>', '\n'])
        .filter(|&i| text[iri_start + i..].starts_with('>'))
        .ok_or_else(|| ("unterminated `<iri>`".to_owned(), iri_start..iri_start + 1))?;
    let iri = &text[iri_start + 1..iri_start + close];
    if let Err(e) = Iri::parse(iri) {
        return Err((e.to_string(), iri_start..iri_start + close + 1));
    }
    Ok((label.to_owned(), iri.to_owned(), iri_start + close + 1))
}

struct Segment {
    keyword: &'static str,
    range: Range<usize>,
}

#[derive(Default)]
struct Segmented {
    items: Vec<Segment>,
    errors: Vec<(&'static str, String, Range<usize>)>,
}

fn keyword_at(text: &str, pos: usize) -> Option<&'static str> {
    let rest = &text[pos..];
    let word_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    TOP_LEVEL_KEYWORDS.iter().copied().find(|k| *k == &rest[..word_end])
}

/// Splits the text after the prefix block into items.
fn segment(text: &str, from: usize) -> Segmented {
    let mut out = Segmented::default();
    let mut current: Option<(usize, &'static str)> = None;
    let mut last_content = from;
    let mut depth = 0usize;
    let mut line_start = true;
    let mut stray_reported = false;
    let mut i = from;
    let close = |out: &mut Segmented, current: Option<(usize, &'static str)>, end: usize| {
        if let Some((start, keyword)) = current {
            out.items.push(Segment { keyword, range: start..end.max(start) });
        }
    };
    while i < text.len() {
        if line_start {
            line_start = false;
            let rest = &text[i..];
            i += rest.len() - rest.trim_start_matches([' ', '\t', '\r']).len();
            if depth == 0 && i < text.len() {
                // headers and declarations are one line long
                let single_line = current.is_some_and(|(_, k)| !matches!(k, "ontology" | "interpretation" | "alignment"));
                if single_line && keyword_at(text, i).is_none() && !text[i..].starts_with('\n') && comment_end(text, i).is_none() {
                    close(&mut out, current.take(), last_content);
                    stray_reported = false;
                }
                if let Some(kw) = keyword_at(text, i) {
                    close(&mut out, current.take(), last_content);
                    current = Some((i, kw));
                } else if current.is_none() && !stray_reported && !text[i..].starts_with('\n') && comment_end(text, i).is_none() {
                    let end = text[i..].find(char::is_whitespace).map_or(text.len(), |n| i + n);
                    out.errors.push(("E103", format!("unknown top-level keyword `{}`", &text[i..end]), i..end));
                    stray_reported = true;
                }
            }
            continue;
        }
        match comment_end(text, i) {
            Some(Ok(end)) => {
                i = end;
                continue;
            }
            Some(Err(())) => {
                out.errors.push(("E109", "unterminated `%{` comment".to_owned(), i..text.len()));
                break;
            }
            None => {}
        }
        let c = text[i..].chars().next().expect("in bounds");
        match c {
            '\n' => {
                line_start = true;
                i += 1;
                continue;
            }
            '"' => {
                let end = string_end(text, i);
                last_content = end;
                i = end;
                continue;
            }
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if !c.is_whitespace() {
            last_content = i + c.len_utf8();
        }
        i += c.len_utf8();
    }
    close(&mut out, current, last_content);
    out
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Word,
    Iri,
    Colon,
    Comma,
    Eq,
    MapsTo,
    Group { inner: Range<usize> },
    Other,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    span: Range<usize>,
}

#[derive(Debug)]
struct LexError {
    code: &'static str,
    message: String,
    span: Range<usize>,
}

fn matching_brace(text: &str, open: usize, limit: usize) -> Result<usize, LexError> {
    let mut depth = 0usize;
    let mut i = open;
    while i < limit {
        match comment_end(text, i) {
            Some(Ok(end)) => {
                i = end;
                continue;
            }
            Some(Err(())) => {
                return Err(LexError { code: "E109", message: "unterminated `%{` comment".into(), span: i..limit })
            }
            None => {}
        }
        let c = text[i..].chars().next().expect("in bounds");
        match c {
            '"' => {
                i = string_end(text, i);
                continue;
            }
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
        i += c.len_utf8();
    }
    Err(LexError { code: "E104", message: "unclosed `{`".into(), span: open..open + 1 })
}

fn is_word_char(text: &str, i: usize) -> bool {
    let rest = &text[i..];
    let c = rest.chars().next().expect("in bounds");
    !(c.is_whitespace()
        || matches!(c, '{' | '}' | '(' | ')' | ',' | '=' | '"' | '<' | '>' | '↦')
        || rest.starts_with("|->")
        || rest.starts_with("%%")
        || rest.starts_with("%{"))
}

fn tokenize(text: &str, range: Range<usize>) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut i = range.start;
    let end = range.end;
    let push = |out: &mut Vec<Token>, kind, span| out.push(Token { kind, span });
    while i < end {
        match comment_end(text, i) {
            Some(Ok(e)) => {
                i = e;
                continue;
            }
            Some(Err(())) => {
                return Err(LexError { code: "E109", message: "unterminated `%{` comment".into(), span: i..end })
            }
            None => {}
        }
        let rest = &text[i..end];
        let c = rest.chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let single = |k| (k, i..i + c.len_utf8());
        let (kind, span) = match c {
            '{' => {
                let close = matching_brace(text, i, end)?;
                (TokKind::Group { inner: i + 1..close }, i..close + 1)
            }
            '}' => return Err(LexError { code: "E104", message: "unmatched `}`".into(), span: i..i + 1 }),
            ',' => single(TokKind::Comma),
            '=' => single(TokKind::Eq),
            '↦' => single(TokKind::MapsTo),
            '|' if rest.starts_with("|->") => (TokKind::MapsTo, i..i + 3),
            '"' => (TokKind::Other, i..string_end(text, i).min(end)),
            '<' => match rest.find(|ch: char| ch == '>' || ch.is_whitespace()) {
                Some(n) if rest[n..].starts_with('>') && n > 1 => (TokKind::Iri, i..i + n + 1),
                _ => single(TokKind::Other),
            },
            _ if is_word_char(text, i) => {
                let mut j = i;
                while j < end && is_word_char(text, j) {
                    j += text[j..].chars().next().expect("in bounds").len_utf8();
                }
                let kind = if &text[i..j] == ":" { TokKind::Colon } else { TokKind::Word };
                (kind, i..j)
            }
            _ => single(TokKind::Other),
        };
        i = span.end;
        push(&mut out, kind, span);
    }
    Ok(out)
}

#[derive(Debug)]
struct Fail {
    code: &'static str,
    message: String,
    span: Range<usize>,
    committed: bool,
}

impl Fail {
    fn new(code: &'static str, message: impl Into<String>, span: Range<usize>) -> Self {
        Fail { code, message: message.into(), span, committed: true }
    }

    fn code(mut self, code: &'static str) -> Self {
        self.code = code;
        self
    }
}

/// Recursive-descent parser over the tokens of one item.
///
/// ```text
/// expr    := union ('then' union)*
/// union   := postfix ('and' postfix)*
/// postfix := unary ('translate' 'with' symbol-map | 'project' 'with' name)*
/// unary   := decl ':' postfix | primary
/// primary := name | '{' expr-or-block '}'
/// ```
///
/// `committed` becomes true once an operator has been consumed: a body that
/// fails before that point is taken as a basic-ontology block, one that fails
/// after it is a syntax error.
struct ExprParser<'s> {
    text: &'s str,
    toks: Vec<Token>,
    pos: usize,
    end: usize,
    prefixes: &'s PrefixMap,
    ctx: LogicDeclaration,
    committed: bool,
    blocks: Vec<Range<usize>>,
    name_errors: Vec<(String, Range<usize>)>,
}

impl<'s> ExprParser<'s> {
    fn new(text: &'s str, toks: Vec<Token>, end: usize, prefixes: &'s PrefixMap, ctx: LogicDeclaration) -> Self {
        ExprParser { text, toks, pos: 0, end, prefixes, ctx, committed: false, blocks: Vec::new(), name_errors: Vec::new() }
    }

    fn fail(&self, message: impl Into<String>) -> Fail {
        let span = self.toks.get(self.pos).map_or(self.end..self.end, |t| t.span.clone());
        Fail { code: "E106", message: message.into(), span, committed: self.committed }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn tok_text(&self, t: &Token) -> &'s str {
        &self.text[t.span.clone()]
    }

    fn peek_word_at(&self, ahead: usize, word: &str) -> bool {
        self.toks.get(self.pos + ahead).is_some_and(|t| t.kind == TokKind::Word && self.tok_text(t) == word)
    }

    fn peek_word(&self, word: &str) -> bool {
        self.peek_word_at(0, word)
    }

    fn eat(&mut self, kind: TokKind) -> Option<Range<usize>> {
        let t = self.toks.get(self.pos)?;
        if t.kind == kind {
            self.pos += 1;
            Some(t.span.clone())
        } else {
            None
        }
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<Range<usize>, Fail> {
        self.eat(kind).ok_or_else(|| self.fail(format!("expected {what}")))
    }

    fn expect_word(&mut self, word: &str) -> Result<(), Fail> {
        if self.peek_word(word) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail(format!("expected `{word}`")))
        }
    }

    fn expect_end(&self) -> Result<(), Fail> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(self.fail(format!("unexpected `{}`", self.tok_text(t)))),
        }
    }

    fn is_name_at(&self, ahead: usize) -> bool {
        let Some(t) = self.toks.get(self.pos + ahead) else { return false };
        match t.kind {
            TokKind::Iri => true,
            TokKind::Word => {
                let w = self.tok_text(t);
                !EXPRESSION_KEYWORDS.contains(&w)
                    && Curie::parse(w).is_ok_and(|c| c.reference.is_empty() || is_curie_reference(&c.reference))
            }
            _ => false,
        }
    }

    /// Consumes a name and resolves it. Resolution failures are collected
    /// rather than returned so that speculative parses stay structural.
    fn name(&mut self) -> Result<Iri, Fail> {
        if !self.is_name_at(0) {
            return Err(self.fail("expected a name"));
        }
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        let text = self.tok_text(&t);
        Ok(match self.prefixes.resolve(text) {
            Ok(iri) => iri,
            Err(e) => {
                self.name_errors.push((e.to_string(), t.span.clone()));
                Iri::parse("urn:x-dolc:unresolved").expect("valid placeholder")
            }
        })
    }

    fn expr(&mut self) -> Result<OntologyExpression, Fail> {
        let mut left = self.union()?;
        while self.peek_word("then") {
            self.pos += 1;
            self.committed = true;
            let right = self.union().map_err(|f| self.dangling(f, "then"))?;
            left = left.then(right);
        }
        Ok(left)
    }

    fn union(&mut self) -> Result<OntologyExpression, Fail> {
        let mut left = self.postfix()?;
        while self.peek_word("and") {
            self.pos += 1;
            self.committed = true;
            let right = self.postfix().map_err(|f| self.dangling(f, "and"))?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn dangling(&self, mut f: Fail, op: &str) -> Fail {
        if f.span.start >= self.end {
            f.message = format!("dangling `{op}`: expected an ontology expression");
        }
        f.committed = true;
        f
    }

    fn postfix(&mut self) -> Result<OntologyExpression, Fail> {
        let mut e = self.unary()?;
        loop {
            if self.peek_word("translate") && self.peek_word_at(1, "with") {
                self.pos += 2;
                self.committed = true;
                let map = self.after_translate_with()?;
                e = OntologyExpression::Translation { base: Box::new(e), mapping: map.translation, renames: map.renames };
            } else if self.peek_word("project") && self.peek_word_at(1, "with") {
                self.pos += 2;
                self.committed = true;
                let mapping = self.name()?;
                e = OntologyExpression::Projection { base: Box::new(e), mapping };
            } else {
                return Ok(e);
            }
        }
    }

    /// `M`, `M, a ↦ b, …` or `a ↦ b, …`
    fn after_translate_with(&mut self) -> Result<SymbolMap, Fail> {
        let mut map = SymbolMap::default();
        if self.is_rename_at(0) {
            map.renames = self.renames()?;
            return Ok(map);
        }
        map.translation = Some(self.name()?);
        if self.toks.get(self.pos).is_some_and(|t| t.kind == TokKind::Comma) && self.is_rename_at(1) {
            self.pos += 1;
            map.renames = self.renames()?;
        }
        Ok(map)
    }

    fn is_rename_at(&self, ahead: usize) -> bool {
        self.is_name_at(ahead)
            && self.toks.get(self.pos + ahead + 1).is_some_and(|t| t.kind == TokKind::MapsTo)
    }

    /// Comma-separated `a ↦ b` pairs; a trailing comma is allowed.
    fn renames(&mut self) -> Result<Vec<SymbolRename>, Fail> {
        let mut out = Vec::new();
        while self.is_name_at(0) {
            let from = self.name()?;
            self.expect(TokKind::MapsTo, "`↦`")?;
            let to = self.name()?;
            out.push(SymbolRename { from, to });
            if self.eat(TokKind::Comma).is_none() {
                break;
            }
        }
        Ok(out)
    }

    fn decl(&mut self) -> Result<LogicDeclaration, Fail> {
        let mut d = LogicDeclaration::default();
        loop {
            let slot = if self.peek_word("language") {
                &mut d.language
            } else if self.peek_word("logic") {
                &mut d.logic
            } else if self.peek_word("syntax") {
                &mut d.serialization
            } else {
                break;
            };
            let already = slot.is_some();
            let kw = self.tok_text(&self.toks[self.pos]);
            if already {
                return Err(self.fail(format!("`{kw}` given twice in one declaration")));
            }
            self.pos += 1;
            let iri = self.name()?;
            match kw {
                "language" => d.language = Some(iri),
                "logic" => d.logic = Some(iri),
                _ => d.serialization = Some(iri),
            }
        }
        if d.is_empty() {
            return Err(self.fail("expected `language`, `logic` or `syntax`"));
        }
        Ok(d)
    }

    fn unary(&mut self) -> Result<OntologyExpression, Fail> {
        if self.peek_word("language") || self.peek_word("logic") || self.peek_word("syntax") {
            let decl = self.decl()?;
            self.expect(TokKind::Colon, "`:` after the declaration")?;
            self.committed = true;
            let outer = std::mem::take(&mut self.ctx);
            self.ctx = decl.shifted_from(&outer);
            let inner = self.postfix();
            self.ctx = outer;
            return Ok(OntologyExpression::ContextShift { decl, inner: Box::new(inner?) });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<OntologyExpression, Fail> {
        if let Some(TokKind::Group { inner }) = self.toks.get(self.pos).map(|t| t.kind.clone()) {
            self.pos += 1;
            return self.group(inner);
        }
        if self.is_name_at(0) {
            return Ok(OntologyExpression::Reference(self.name()?));
        }
        Err(self.fail("expected an ontology name or `{`"))
    }

    /// Braced content: an expression when it parses as one, otherwise a
    /// verbatim basic-ontology block.
    fn group(&mut self, inner: Range<usize>) -> Result<OntologyExpression, Fail> {
        let toks = tokenize(self.text, inner.clone()).map_err(|e| Fail::new(e.code, e.message, e.span))?;
        let mut sub = ExprParser::new(self.text, toks, inner.end, self.prefixes, self.ctx.clone());
        let result = if sub.at_end() {
            Err(sub.fail("empty group"))
        } else {
            sub.expr().and_then(|e| sub.expect_end().map(|_| e))
        };
        match result {
            Ok(e) => {
                self.blocks.append(&mut sub.blocks);
                self.name_errors.append(&mut sub.name_errors);
                Ok(e)
            }
            Err(f) if f.committed => Err(f),
            Err(_) => {
                let block = trimmed(self.text, inner);
                let text = &self.text[block.clone()];
                self.blocks.push(block);
                Ok(OntologyExpression::Inline(BasicOntologyBlock::new(self.ctx.clone(), text)))
            }
        }
    }
}

/// Stable indented dump of a parsed document; IRIs are printed in full and
/// block texts as JSON strings.
pub fn dump_ast(doc: &DistributedOntology) -> String {
    let mut out = String::new();
    match &doc.iri {
        Some(iri) => writeln!(out, "DistributedOntology <{iri}>").unwrap(),
        None => writeln!(out, "DistributedOntology -").unwrap(),
    }
    for (label, ns) in doc.prefixes.iter() {
        writeln!(out, "  Prefix {label}: <{ns}>").unwrap();
    }
    for item in &doc.items {
        match item {
            Item::Logic(d) => writeln!(out, "  Logic {}", dump_decl(d)).unwrap(),
            Item::Definition(def) => {
                writeln!(out, "  Ontology <{}>", def.iri).unwrap();
                dump_expr(&mut out, &def.body, 2);
            }
            Item::Link(link) => {
                let kind = match link.kind {
                    LinkKind::Interpretation => "Interpretation",
                    LinkKind::Alignment => "Alignment",
                    LinkKind::Import => "Import",
                    LinkKind::ConservativeExtensionClaim => "ConservativeExtensionClaim",
                    LinkKind::DefinitionalExtensionClaim => "DefinitionalExtensionClaim",
                };
                writeln!(out, "  {kind} <{}>", link.iri).unwrap();
                writeln!(out, "    Source").unwrap();
                dump_expr(&mut out, &link.source, 3);
                writeln!(out, "    Target").unwrap();
                dump_expr(&mut out, &link.target, 3);
                match &link.payload {
                    LinkPayload::SymbolMap(m) => {
                        match &m.translation {
                            Some(t) => writeln!(out, "    SymbolMap translation=<{t}>").unwrap(),
                            None => writeln!(out, "    SymbolMap translation=-").unwrap(),
                        }
                        for r in &m.renames {
                            writeln!(out, "      Rename <{}> -> <{}>", r.from, r.to).unwrap();
                        }
                    }
                    LinkPayload::Correspondences(list) => {
                        let empty = PrefixMap::new();
                        let printer = ManchesterPrinter { prefixes: &empty, local_names: false };
                        for c in &list.entries {
                            writeln!(
                                out,
                                "    Correspondence <{}> {} {}",
                                c.left,
                                c.relation.as_str(),
                                printer.class_expr(&c.right)
                            )
                            .unwrap();
                        }
                    }
                }
            }
        }
    }
    out
}

fn dump_decl(d: &LogicDeclaration) -> String {
    let part = |name: &str, v: &Option<Iri>| match v {
        Some(i) => format!("{name}=<{i}>"),
        None => format!("{name}=-"),
    };
    format!("{} {} {}", part("language", &d.language), part("logic", &d.logic), part("syntax", &d.serialization))
}

fn dump_expr(out: &mut String, e: &OntologyExpression, depth: usize) {
    let pad = "  ".repeat(depth);
    match e {
        OntologyExpression::Reference(i) => writeln!(out, "{pad}Reference <{i}>").unwrap(),
        OntologyExpression::Inline(b) => {
            writeln!(out, "{pad}Inline {}", dump_decl(&b.decl)).unwrap();
            writeln!(out, "{pad}  text {}", serde_json::to_string(&b.text).expect("strings serialize")).unwrap();
        }
        OntologyExpression::Extension(a, b) => {
            writeln!(out, "{pad}Extension").unwrap();
            dump_expr(out, a, depth + 1);
            dump_expr(out, b, depth + 1);
        }
        OntologyExpression::Union(a, b) => {
            writeln!(out, "{pad}Union").unwrap();
            dump_expr(out, a, depth + 1);
            dump_expr(out, b, depth + 1);
        }
        OntologyExpression::Translation { base, mapping, renames } => {
            match mapping {
                Some(m) => writeln!(out, "{pad}Translation mapping=<{m}>").unwrap(),
                None => writeln!(out, "{pad}Translation mapping=-").unwrap(),
            }
            for r in renames {
                writeln!(out, "{pad}  Rename <{}> -> <{}>", r.from, r.to).unwrap();
            }
            dump_expr(out, base, depth + 1);
        }
        OntologyExpression::Projection { base, mapping } => {
            writeln!(out, "{pad}Projection mapping=<{mapping}>").unwrap();
            dump_expr(out, base, depth + 1);
        }
        OntologyExpression::ContextShift { decl, inner } => {
            writeln!(out, "{pad}ContextShift {}", dump_decl(decl)).unwrap();
            dump_expr(out, inner, depth + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "%prefix( : <http://ex.org/d#> log: <http://purl.net/dol/logics/> ser: <http://purl.net/dol/serializations/> )%\ndistributed-ontology D\n";

    fn parse_ok(body: &str) -> Parsed {
        let p = parse_document(&format!("{HEAD}{body}"));
        assert!(!p.has_errors(), "{:?}", p.diagnostics);
        p
    }

    fn ex(local: &str) -> Iri {
        Iri::parse(format!("http://ex.org/d#{local}")).unwrap()
    }

    fn body(p: &Parsed, n: usize) -> &OntologyExpression {
        &p.document.definitions().nth(n).unwrap().body
    }

    #[test]
    fn empty_input_warns() {
        let p = parse_document("");
        assert!(p.document.items.is_empty());
        assert_eq!(p.diagnostics.len(), 1);
        assert_eq!(p.diagnostics[0].code, "W101");
        assert_eq!(p.diagnostics[0].message, "no distributed-ontology header");
    }

    #[test]
    fn precedence_then_and_translate() {
        let p = parse_ok("ontology X = A and B translate with M then C\n");
        let a = OntologyExpression::Reference(ex("A"));
        let b = OntologyExpression::Translation {
            base: Box::new(OntologyExpression::Reference(ex("B"))),
            mapping: Some(ex("M")),
            renames: vec![],
        };
        assert_eq!(body(&p, 0), &a.and(b).then(OntologyExpression::Reference(ex("C"))));
    }

    #[test]
    fn union_of_equal_references_is_kept() {
        let p = parse_ok("ontology X = A and A\n");
        let a = OntologyExpression::Reference(ex("A"));
        assert_eq!(body(&p, 0), &a.clone().and(a));
    }

    #[test]
    fn verbatim_block_and_spans() {
        let src = format!("{HEAD}logic log:Propositional syntax ser:Prop/Hets\nontology T =\n  props a, b\n  . a --> b\n\n%% trailing\n");
        let p = parse_document(&src);
        assert!(!p.has_errors(), "{:?}", p.diagnostics);
        let OntologyExpression::Inline(b) = body(&p, 0) else { panic!() };
        assert_eq!(b.text, "props a, b\n  . a --> b");
        assert_eq!(b.decl.logic.as_ref().unwrap().as_str(), "http://purl.net/dol/logics/Propositional");
        let r = p.source_map.block(1, 0).unwrap();
        assert_eq!(&src[r], b.text);
        assert!(src[p.source_map.items[1].clone()].ends_with("a --> b"));
    }

    #[test]
    fn braces_hold_blocks_and_context_shift() {
        let p = parse_ok("ontology X = A then syntax ser:Other : { Class: Foo }\n");
        let OntologyExpression::Extension(_, rhs) = body(&p, 0) else { panic!() };
        let OntologyExpression::ContextShift { decl, inner } = rhs.as_ref() else { panic!() };
        assert!(decl.language.is_none());
        let OntologyExpression::Inline(b) = inner.as_ref() else { panic!() };
        assert_eq!(b.text, "Class: Foo");
        assert_eq!(b.decl.serialization.as_ref().unwrap().as_str(), "http://purl.net/dol/serializations/Other");
    }

    #[test]
    fn dangling_operator_is_an_error() {
        let p = parse_document(&format!("{HEAD}ontology X = A then\nontology Y = B\n"));
        let errs: Vec<_> = p.diagnostics.iter().filter(|d| d.is_error()).collect();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, "E106");
        assert!(errs[0].message.contains("dangling `then`"));
        // recovery: the next item still parses
        assert_eq!(p.document.definitions().count(), 1);
    }

    #[test]
    fn unknown_prefix_reports_e102() {
        let p = parse_document(&format!("{HEAD}ontology X = zz:A then B\n"));
        assert_eq!(p.diagnostics[0].code, "E102");
        assert_eq!(p.diagnostics[0].span.as_ref().unwrap().line, 3);
        assert!(p.document.items.is_empty());
    }

    #[test]
    fn unknown_keyword_and_unbalanced_braces() {
        let p = parse_document(&format!("{HEAD}frobnicate X\nontology X = {{ A then B\n"));
        let codes: Vec<_> = p.diagnostics.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec!["E103", "E104"]);
        let p = parse_document(&format!("{HEAD}ontology X = A }}\n"));
        assert_eq!(p.diagnostics[0].code, "E104");
    }

    #[test]
    fn interpretation_with_and_without_colon() {
        let p = parse_ok("interpretation I : A to B = translate with M, a ↦ b, c |-> d,\ninterpretation J A to {B and C}\n");
        let links: Vec<_> = p.document.links().collect();
        let LinkPayload::SymbolMap(m) = &links[0].payload else { panic!() };
        assert_eq!(m.translation, Some(ex("M")));
        assert_eq!(m.renames.len(), 2);
        assert_eq!(m.renames[1], SymbolRename { from: ex("c"), to: ex("d") });
        assert!(matches!(links[1].target, OntologyExpression::Union(..)));
    }

    #[test]
    fn alignment_correspondences() {
        let p = parse_ok("alignment L : A to B =\n  x = ∃ r . y,\n  z = (p or q) and r some s,\n");
        let LinkPayload::Correspondences(c) = &p.document.links().next().unwrap().payload else { panic!() };
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.entries[0].left, ex("x"));
    }

    #[test]
    fn duplicate_names_rejected() {
        let p = parse_document(&format!("{HEAD}ontology X = A\nontology X = B\n"));
        assert_eq!(p.diagnostics[0].code, "E107");
        assert_eq!(p.document.items.len(), 1);
    }

    #[test]
    fn header_must_come_first() {
        let p = parse_document(&format!("{HEAD}distributed-ontology Again\n"));
        assert_eq!(p.diagnostics[0].code, "E108");
    }

    #[test]
    fn prefix_block_errors_recover() {
        let p = parse_document("%prefix( 1x: <http://a/> b: <http://b/> c: nope )%\ndistributed-ontology b:D\n");
        let codes: Vec<_> = p.diagnostics.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec!["E101", "E101"]);
        assert_eq!(p.document.iri.as_ref().unwrap().as_str(), "http://b/D");
    }

    #[test]
    fn comments_are_trivia() {
        let p = parse_ok("%{ a block\n comment }%\n%% line\nontology X = A %% trailing\n  then B\n");
        assert!(matches!(body(&p, 0), OntologyExpression::Extension(..)));
    }

    #[test]
    fn standalone_expression_entry_point() {
        let prefixes: PrefixMap = [("", "http://ex.org/d#")].into_iter().collect();
        let e = parse_ontology_expression("A then B", &prefixes, &LogicDeclaration::default()).unwrap();
        assert_eq!(e, OntologyExpression::Reference(ex("A")).then(OntologyExpression::Reference(ex("B"))));
        let err = parse_ontology_expression("A and", &prefixes, &LogicDeclaration::default()).unwrap_err();
        assert_eq!(err[0].code, "E106");
    }
}
