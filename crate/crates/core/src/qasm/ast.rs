//! Lossless AST for the supported fragment, with source positions.

use super::lexer::Span;

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub version: Option<String>,
    pub includes: Vec<String>,
    pub statements: Vec<Stmt>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    /// `qubit q;` / `qubit[4] q;` / `bit c;` / `bit[3] c;`
    Decl { quantum: bool, size: Option<u32>, name: String, span: Span },
    /// `ctrl @ … @ name [(params)] operands ;` — params are kept verbatim so
    /// unsupported parameterized gates reach the analyzer with their name.
    Gate {
        ctrl_count: u32,
        name: String,
        params: Vec<String>,
        operands: Vec<Operand>,
        span: Span,
    },
    /// Both syntaxes: `c = measure q;` (arrow=false) / `measure q -> c;`.
    Measure { qubit: Operand, bit: Operand, arrow: bool, span: Span },
    Reset { qubit: Operand, span: Span },
    If { cond: Cond, then_body: Vec<Stmt>, else_body: Option<Vec<Stmt>>, span: Span },
    Switch {
        scrutinee: Operand,
        cases: Vec<(Vec<u64>, Vec<Stmt>)>,
        default: Option<Vec<Stmt>>,
        span: Span,
    },
    For { ty: String, var: String, lo: ForBound, hi: ForBound, body: Vec<Stmt>, span: Span },
    While { cond: Cond, body: Vec<Stmt>, span: Span },
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::Decl { span, .. }
            | Stmt::Gate { span, .. }
            | Stmt::Measure { span, .. }
            | Stmt::Reset { span, .. }
            | Stmt::If { span, .. }
            | Stmt::Switch { span, .. }
            | Stmt::For { span, .. }
            | Stmt::While { span, .. } => *span,
        }
    }
}

/// A register reference, optionally indexed: `q` or `q[3]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operand {
    pub name: String,
    pub index: Option<u32>,
    pub span: Span,
}

/// Bit or register compared against an integer literal.
#[derive(Clone, Debug, PartialEq)]
pub struct Cond {
    pub lhs: Operand,
    pub equal: bool,
    pub rhs: u64,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ForBound {
    Lit(i64),
    Name(String),
}

/// Zero out every span so ASTs from different pretty-printings compare equal.
pub fn strip_spans(program: &mut Program) {
    for s in &mut program.statements {
        strip_stmt(s);
    }
}

fn strip_stmt(s: &mut Stmt) {
    match s {
        Stmt::Decl { span, .. } => *span = Span::default(),
        Stmt::Gate { span, operands, .. } => {
            *span = Span::default();
            for o in operands {
                o.span = Span::default();
            }
        }
        Stmt::Measure { span, qubit, bit, .. } => {
            *span = Span::default();
            qubit.span = Span::default();
            bit.span = Span::default();
        }
        Stmt::Reset { span, qubit } => {
            *span = Span::default();
            qubit.span = Span::default();
        }
        Stmt::If { span, cond, then_body, else_body } => {
            *span = Span::default();
            strip_cond(cond);
            for s in then_body {
                strip_stmt(s);
            }
            if let Some(body) = else_body {
                for s in body {
                    strip_stmt(s);
                }
            }
        }
        Stmt::Switch { span, scrutinee, cases, default } => {
            *span = Span::default();
            scrutinee.span = Span::default();
            for (_, body) in cases {
                for s in body {
                    strip_stmt(s);
                }
            }
            if let Some(body) = default {
                for s in body {
                    strip_stmt(s);
                }
            }
        }
        Stmt::For { span, body, .. } => {
            *span = Span::default();
            for s in body {
                strip_stmt(s);
            }
        }
        Stmt::While { span, cond, body } => {
            *span = Span::default();
            strip_cond(cond);
            for s in body {
                strip_stmt(s);
            }
        }
    }
}

fn strip_cond(c: &mut Cond) {
    c.span = Span::default();
    c.lhs.span = Span::default();
}
