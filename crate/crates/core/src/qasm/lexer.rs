//! Hand-rolled lexer for the supported OpenQASM 3 fragment.

use super::diag::{Diagnostic, DiagnosticCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Float(String),
    Str(String),
    // punctuation
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Assign,
    EqEq,
    NotEq,
    /// `<`, `>`, `<=`, `>=` — lexed so the parser can explain that guards
    /// only support `==` and `!=`.
    OtherCmp(String),
    Arrow,
    At,
    Colon,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Float(s) => format!("number `{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::NotEq => "`!=`".into(),
            Tok::OtherCmp(op) => format!("`{op}`"),
            Tok::Arrow => "`->`".into(),
            Tok::At => "`@`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(text: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(ch) = c {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let span = Span { line, col };
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => break,
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '/' => {
                bump!();
                match chars.peek() {
                    Some('/') => {
                        while let Some(&ch) = chars.peek() {
                            if ch == '\n' {
                                break;
                            }
                            bump!();
                        }
                    }
                    Some('*') => {
                        bump!();
                        let mut closed = false;
                        while let Some(ch) = bump!() {
                            if ch == '*' && chars.peek() == Some(&'/') {
                                bump!();
                                closed = true;
                                break;
                            }
                        }
                        if !closed {
                            return Err(vec![Diagnostic::new(
                                DiagnosticCode::LexError,
                                "unterminated block comment".into(),
                                span,
                            )]);
                        }
                    }
                    _ => {
                        return Err(vec![Diagnostic::new(
                            DiagnosticCode::LexError,
                            "unexpected character `/`".into(),
                            span,
                        )])
                    }
                }
            }
            ';' => {
                bump!();
                out.push(Token { tok: Tok::Semi, span });
            }
            ',' => {
                bump!();
                out.push(Token { tok: Tok::Comma, span });
            }
            '(' => {
                bump!();
                out.push(Token { tok: Tok::LParen, span });
            }
            ')' => {
                bump!();
                out.push(Token { tok: Tok::RParen, span });
            }
            '{' => {
                bump!();
                out.push(Token { tok: Tok::LBrace, span });
            }
            '}' => {
                bump!();
                out.push(Token { tok: Tok::RBrace, span });
            }
            '[' => {
                bump!();
                out.push(Token { tok: Tok::LBracket, span });
            }
            ']' => {
                bump!();
                out.push(Token { tok: Tok::RBracket, span });
            }
            '@' => {
                bump!();
                out.push(Token { tok: Tok::At, span });
            }
            ':' => {
                bump!();
                out.push(Token { tok: Tok::Colon, span });
            }
            '<' | '>' => {
                bump!();
                let mut op = c.to_string();
                if chars.peek() == Some(&'=') {
                    bump!();
                    op.push('=');
                }
                out.push(Token { tok: Tok::OtherCmp(op), span });
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Token { tok: Tok::EqEq, span });
                } else {
                    out.push(Token { tok: Tok::Assign, span });
                }
            }
            '!' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Token { tok: Tok::NotEq, span });
                } else {
                    return Err(vec![Diagnostic::new(
                        DiagnosticCode::LexError,
                        "unexpected character `!` (expected `!=`)".into(),
                        span,
                    )]);
                }
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push(Token { tok: Tok::Arrow, span });
                } else {
                    return Err(vec![Diagnostic::new(
                        DiagnosticCode::LexError,
                        "unexpected character `-` (expected `->`)".into(),
                        span,
                    )]);
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                let mut closed = false;
                while let Some(ch) = bump!() {
                    if ch == '"' {
                        closed = true;
                        break;
                    }
                    s.push(ch);
                }
                if !closed {
                    return Err(vec![Diagnostic::new(
                        DiagnosticCode::LexError,
                        "unterminated string literal".into(),
                        span,
                    )]);
                }
                out.push(Token { tok: Tok::Str(s), span });
            }
            '0'..='9' => {
                let mut s = String::new();
                let mut is_float = false;
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_digit() {
                        s.push(ch);
                        bump!();
                    } else if ch == '.' && !is_float {
                        is_float = true;
                        s.push(ch);
                        bump!();
                    } else {
                        break;
                    }
                }
                if is_float {
                    out.push(Token { tok: Tok::Float(s), span });
                } else {
                    match s.parse::<u64>() {
                        Ok(v) => out.push(Token { tok: Tok::Int(v), span }),
                        Err(_) => {
                            return Err(vec![Diagnostic::new(
                                DiagnosticCode::LexError,
                                format!("integer literal `{s}` out of range"),
                                span,
                            )])
                        }
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' || c == '$' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' || ch == '$' {
                        s.push(ch);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Ident(s), span });
            }
            other => {
                return Err(vec![Diagnostic::new(
                    DiagnosticCode::LexError,
                    format!("unexpected character {other:?}"),
                    span,
                )])
            }
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}
