//! Diagnostics shared by the parser, analyzer and linter.
//!
//! Codes are stable: `E1xx` parse errors, `E2xx` analysis errors, `W1xx`
//! warnings, `I1xx` informational notes.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

/// Byte range plus the 1-based line and column of its start.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: &'static str, message: impl Into<String>, span: Option<SourceSpan>) -> Self {
        Diagnostic { severity, code, message: message.into(), span }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity[code]: message`
    pub fn render(&self, file: &str) -> String {
        let (line, col) = self.span.as_ref().map_or((1, 1), |s| (s.line, s.column));
        format!("{file}:{line}:{col}: {}[{}]: {}", self.severity, self.code, self.message)
    }
}

/// Maps byte offsets of one source text to lines and columns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LineIndex {
    text_len: usize,
    line_starts: Vec<usize>,
    /// Kept to count columns in characters rather than bytes.
    text: String,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { text_len: text.len(), line_starts, text: text.to_owned() }
    }

    /// 1-based line and column (in characters) of a byte offset.
    pub fn position(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text_len);
        let line = self.line_starts.partition_point(|&s| s <= offset) - 1;
        let start = self.line_starts[line];
        let col = self.text.get(start..offset).map_or(offset - start, |s| s.chars().count());
        (line + 1, col + 1)
    }

    pub fn span(&self, range: Range<usize>) -> SourceSpan {
        let (line, column) = self.position(range.start);
        SourceSpan { start: range.start, end: range.end, line, column }
    }
}
