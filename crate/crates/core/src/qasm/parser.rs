//! Recursive-descent parser for the supported OpenQASM 3 fragment.
//!
//! The grammar shipped in `docs/grammar.ebnf` is the authoritative list of
//! what this parser accepts. Syntax errors carry line/column and an
//! expected-token hint.

use super::ast::*;
use super::diag::{Diagnostic, DiagnosticCode};
use super::lexer::{lex, Span, Tok, Token};

pub fn parse(text: &str) -> Result<Program, Vec<Diagnostic>> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    p.program().map_err(|d| vec![d])
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> Diagnostic {
        Diagnostic::new(
            DiagnosticCode::SyntaxError,
            format!("expected {expected}, found {}", self.peek().describe()),
            self.span(),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.err(expected)),
        }
    }

    fn int(&mut self, expected: &str) -> PResult<u64> {
        match self.peek() {
            Tok::Int(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.err(expected)),
        }
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn program(&mut self) -> PResult<Program> {
        let mut version = None;
        if self.at_ident("OPENQASM") {
            self.bump();
            version = Some(match self.peek() {
                Tok::Int(v) => {
                    let s = v.to_string();
                    self.bump();
                    s
                }
                Tok::Float(s) => {
                    let s = s.clone();
                    self.bump();
                    s
                }
                _ => return Err(self.err("a version number after OPENQASM")),
            });
            self.expect(Tok::Semi, "`;` after the version")?;
            if let Some(v) = &version {
                if !v.starts_with('3') {
                    return Err(Diagnostic::new(
                        DiagnosticCode::UnsupportedConstruct,
                        format!("unsupported OpenQASM version {v}"),
                        self.span(),
                    ));
                }
            }
        }
        let mut includes = Vec::new();
        while self.at_ident("include") {
            let span = self.span();
            self.bump();
            match self.bump() {
                Tok::Str(s) => {
                    if s != "stdgates.inc" {
                        return Err(Diagnostic::new(
                            DiagnosticCode::UnsupportedConstruct,
                            format!("unsupported include {s:?} (only \"stdgates.inc\")"),
                            span,
                        ));
                    }
                    includes.push(s);
                }
                _ => return Err(self.err("a string literal after include")),
            }
            self.expect(Tok::Semi, "`;` after include")?;
        }
        let mut statements = Vec::new();
        while *self.peek() != Tok::Eof {
            statements.push(self.statement(true)?);
        }
        Ok(Program { version, includes, statements })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut body = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return Err(self.err("`}`"));
            }
            body.push(self.statement(false)?);
        }
        self.bump();
        Ok(body)
    }

    fn statement(&mut self, top_level: bool) -> PResult<Stmt> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(word) => match word.as_str() {
                "qubit" | "bit" => {
                    if !top_level {
                        return Err(Diagnostic::new(
                            DiagnosticCode::UnsupportedConstruct,
                            "declarations are only supported at the top level".into(),
                            span,
                        ));
                    }
                    self.decl(span)
                }
                "measure" => {
                    // `measure q -> c;`
                    self.bump();
                    let qubit = self.operand()?;
                    self.expect(Tok::Arrow, "`->` in measure statement")?;
                    let bit = self.operand()?;
                    self.expect(Tok::Semi, "`;`")?;
                    Ok(Stmt::Measure { qubit, bit, arrow: true, span })
                }
                "reset" => {
                    self.bump();
                    let qubit = self.operand()?;
                    self.expect(Tok::Semi, "`;`")?;
                    Ok(Stmt::Reset { qubit, span })
                }
                "if" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let cond = self.cond()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let then_body = self.block()?;
                    let else_body = if self.at_ident("else") {
                        self.bump();
                        Some(self.block()?)
                    } else {
                        None
                    };
                    Ok(Stmt::If { cond, then_body, else_body, span })
                }
                "switch" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let scrutinee = self.operand()?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::LBrace, "`{`")?;
                    let mut cases = Vec::new();
                    let mut default = None;
                    loop {
                        if self.at_ident("case") {
                            self.bump();
                            let mut values = vec![self.int("an integer case label")?];
                            while *self.peek() == Tok::Comma {
                                self.bump();
                                values.push(self.int("an integer case label")?);
                            }
                            cases.push((values, self.block()?));
                        } else if self.at_ident("default") {
                            self.bump();
                            if default.is_some() {
                                return Err(self.err("`}` (duplicate default)"));
                            }
                            default = Some(self.block()?);
                        } else if *self.peek() == Tok::RBrace {
                            self.bump();
                            break;
                        } else {
                            return Err(self.err("`case`, `default`, or `}`"));
                        }
                    }
                    Ok(Stmt::Switch { scrutinee, cases, default, span })
                }
                "for" => {
                    self.bump();
                    let ty = self.ident("a loop variable type (int or uint)")?;
                    if ty != "int" && ty != "uint" {
                        return Err(Diagnostic::new(
                            DiagnosticCode::UnsupportedConstruct,
                            format!("unsupported loop variable type `{ty}`"),
                            span,
                        ));
                    }
                    let var = self.ident("a loop variable name")?;
                    if !self.at_ident("in") {
                        return Err(self.err("`in`"));
                    }
                    self.bump();
                    self.expect(Tok::LBracket, "`[`")?;
                    let lo = self.for_bound()?;
                    self.expect(Tok::Colon, "`:`")?;
                    let hi = self.for_bound()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    let body = self.block()?;
                    Ok(Stmt::For { ty, var, lo, hi, body, span })
                }
                "while" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let cond = self.cond()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let body = self.block()?;
                    Ok(Stmt::While { cond, body, span })
                }
                "ctrl" => self.gate(span),
                _ => {
                    // gate application or `c = measure q;`
                    let save = self.pos;
                    let first = self.operand()?;
                    if *self.peek() == Tok::Assign {
                        self.bump();
                        if !self.at_ident("measure") {
                            return Err(self.err("`measure` after `=`"));
                        }
                        self.bump();
                        let qubit = self.operand()?;
                        self.expect(Tok::Semi, "`;`")?;
                        return Ok(Stmt::Measure { qubit, bit: first, arrow: false, span });
                    }
                    self.pos = save;
                    self.gate(span)
                }
            },
            _ => Err(self.err("a statement")),
        }
    }

    fn decl(&mut self, span: Span) -> PResult<Stmt> {
        let kind = self.ident("`qubit` or `bit`")?;
        let quantum = kind == "qubit";
        let size = if *self.peek() == Tok::LBracket {
            self.bump();
            let v = self.int("a register size")?;
            self.expect(Tok::RBracket, "`]`")?;
            if v == 0 || v > u32::MAX as u64 {
                return Err(Diagnostic::new(
                    DiagnosticCode::BadIndex,
                    format!("register size {v} out of range"),
                    span,
                ));
            }
            Some(v as u32)
        } else {
            None
        };
        let name = self.ident("a register name")?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(Stmt::Decl { quantum, size, name, span })
    }

    fn gate(&mut self, span: Span) -> PResult<Stmt> {
        let mut ctrl_count = 0u32;
        while self.at_ident("ctrl") {
            self.bump();
            self.expect(Tok::At, "`@` after ctrl")?;
            ctrl_count += 1;
        }
        if self.at_ident("negctrl") {
            return Err(Diagnostic::new(
                DiagnosticCode::UnsupportedModifier,
                "negctrl is not supported; sandwich the control with explicit x gates".into(),
                self.span(),
            ));
        }
        let name = self.ident("a gate name")?;
        // Parameterized syntax is parsed (so the analyzer can name the gate
        // in its diagnostic) but never supported.
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                match self.bump() {
                    Tok::Int(v) => params.push(v.to_string()),
                    Tok::Float(s) => params.push(s),
                    Tok::Ident(s) => params.push(s),
                    _ => return Err(self.err("a gate parameter")),
                }
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(self.err("`,` or `)`")),
                }
            }
        }
        let mut operands = vec![self.operand()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            operands.push(self.operand()?);
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(Stmt::Gate { ctrl_count, name, params, operands, span })
    }

    fn operand(&mut self) -> PResult<Operand> {
        let span = self.span();
        let name = self.ident("a register name")?;
        let index = if *self.peek() == Tok::LBracket {
            self.bump();
            let v = match self.peek() {
                Tok::Int(v) => {
                    let v = *v;
                    self.bump();
                    v
                }
                Tok::Ident(_) => {
                    return Err(Diagnostic::new(
                        DiagnosticCode::UnsupportedConstruct,
                        "register indices must be integer literals".into(),
                        self.span(),
                    ))
                }
                _ => return Err(self.err("an integer index")),
            };
            self.expect(Tok::RBracket, "`]`")?;
            if v > u32::MAX as u64 {
                return Err(Diagnostic::new(
                    DiagnosticCode::BadIndex,
                    format!("index {v} out of range"),
                    span,
                ));
            }
            Some(v as u32)
        } else {
            None
        };
        Ok(Operand { name, index, span })
    }

    fn cond(&mut self) -> PResult<Cond> {
        let span = self.span();
        let lhs = self.operand()?;
        let equal = match self.peek() {
            Tok::EqEq => true,
            Tok::NotEq => false,
            _ => return Err(self.err("`==` or `!=` (guards compare a bit or register to an integer literal)")),
        };
        self.bump();
        let rhs = self.int("an integer literal on the right of the comparison")?;
        Ok(Cond { lhs, equal, rhs, span })
    }

    fn for_bound(&mut self) -> PResult<ForBound> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(ForBound::Lit(v as i64))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(ForBound::Name(s))
            }
            _ => Err(self.err("an integer loop bound")),
        }
    }
}
