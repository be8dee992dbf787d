//! Frontend for the supported OpenQASM 3 fragment: lexer, recursive-descent
//! parser, pretty-printer, and static analyzer producing the block tree the
//! executor runs.
//!
//! The fragment covers what circuit-building tools emit for Clifford+T
//! programs with classical control: qubit/bit declarations (scalar and
//! array), the gate names x/y/z/h/s/sdg/t/tdg/cx/cz/swap/ccx plus `ctrl @`
//! chains on x and z, both measurement syntaxes, `reset`, `if`/`else`,
//! `switch`, `for` with static bounds, and `while`. Guards compare a bit or
//! register against an integer literal with `==` or `!=` (registers read
//! little-endian). The grammar is documented in `docs/grammar.ebnf`, the
//! diagnostic codes in `docs/diagnostics.md`.

pub mod analyze;
pub mod ast;
pub mod diag;
pub mod ir;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use analyze::{analyze, parse_and_analyze};
pub use ast::{strip_spans, Program};
pub use diag::{Diagnostic, DiagnosticCode};
pub use ir::{BitSource, Block, BlockTree, Condition, Dqc, MeasureKind, MeasurementInfo, Op, ProgramIR, RegInfo};
pub use lexer::Span;
pub use parser::parse;
pub use pretty::pretty;
