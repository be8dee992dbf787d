//! Machine-readable diagnostics: `{code, message, line, col}`.

use super::lexer::Span;
use serde::Serialize;
use std::fmt;

/// Stable diagnostic codes; the full list is documented in
/// `docs/diagnostics.md`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticCode {
    LexError,
    SyntaxError,
    UnsupportedGate,
    UnsupportedModifier,
    UnsupportedConstruct,
    Undeclared,
    Redeclared,
    BadIndex,
    DuplicateOperand,
    NonStaticBounds,
    ResetUnknownState,
    GuardUnwritten,
    MeasureShape,
}

impl DiagnosticCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagnosticCode::LexError => "lex-error",
            DiagnosticCode::SyntaxError => "syntax-error",
            DiagnosticCode::UnsupportedGate => "unsupported-gate",
            DiagnosticCode::UnsupportedModifier => "unsupported-modifier",
            DiagnosticCode::UnsupportedConstruct => "unsupported-construct",
            DiagnosticCode::Undeclared => "undeclared",
            DiagnosticCode::Redeclared => "redeclared",
            DiagnosticCode::BadIndex => "bad-index",
            DiagnosticCode::DuplicateOperand => "duplicate-operand",
            DiagnosticCode::NonStaticBounds => "non-static-bounds",
            DiagnosticCode::ResetUnknownState => "reset-unknown-state",
            DiagnosticCode::GuardUnwritten => "guard-unwritten",
            DiagnosticCode::MeasureShape => "measure-shape",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    pub line: u32,
    pub col: u32,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, message: String, span: Span) -> Self {
        Diagnostic { code, message, line: span.line, col: span.col }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.code.as_str(), self.message)
    }
}
