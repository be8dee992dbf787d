//! Static analysis: declaration and operand checking, gate-set validation,
//! `for` unrolling, `reset` lowering, measurement classification, and block
//! tree construction.
//!
//! A measurement is *mid-circuit* when its outcome feeds a later guard, when
//! the measured qubit is operated on afterwards, or when it sits inside a
//! loop body; otherwise it is *final* and can be deferred to the end of the
//! run. `reset q` is legal only where `q` is classically known — still in its
//! initial |0⟩, or immediately after its own measurement — and lowers to a
//! bit-conditioned X (or to nothing).

use super::ast::{Cond, ForBound, Operand, Program, Stmt};
use super::diag::{Diagnostic, DiagnosticCode};
use super::ir::*;
use super::lexer::Span;
use crate::kernel::GateOp;
use std::collections::HashMap;

pub fn analyze(program: &Program) -> Result<ProgramIR, Vec<Diagnostic>> {
    let mut a = Analyzer::new();
    a.collect_decls(program);
    let mut statuses = vec![QStatus::Zero; a.num_qubits as usize];
    let lowered = a.lower(&program.statements, &mut statuses, true);
    if !a.diags.is_empty() {
        return Err(a.diags);
    }
    let mut cls = Classifier::default();
    cls.walk(&lowered, false, &mut Vec::new());
    // guard-written check: a guard must depend on at least one bit that is
    // written before it (or inside an enclosing loop that re-runs the write);
    // other referenced bits keep their initial zeros
    for read in &cls.reads {
        let ok = read.bits.iter().any(|&bit| {
            cls.writes
                .iter()
                .any(|w| w.bit == bit && (w.pos < read.pos || read.ranges.iter().any(|r| w.pos >= r.0 && w.pos <= r.1)))
        });
        if !ok {
            a.diags.push(Diagnostic::new(
                DiagnosticCode::GuardUnwritten,
                "guard reads bits that are never written before this point".into(),
                read.span,
            ));
        }
    }
    if !a.diags.is_empty() {
        return Err(a.diags);
    }
    let mut measurements: Vec<MeasurementInfo> = cls
        .meas
        .iter()
        .map(|m| {
            let later_touch = cls.touches.iter().any(|t| t.pos > m.pos && t.qubit == m.qubit);
            let later_read = cls.reads.iter().any(|r| r.pos > m.pos && r.bits.contains(&m.bit));
            let kind = if m.in_loop || later_touch || later_read {
                MeasureKind::Mid
            } else {
                MeasureKind::Final
            };
            MeasurementInfo { id: m.id, qubit: m.qubit, bit: m.bit, kind }
        })
        .collect();
    measurements.sort_by_key(|m| m.id);
    let final_kinds: HashMap<usize, MeasureKind> = measurements.iter().map(|m| (m.id, m.kind)).collect();
    let blocks = build_blocks(&lowered, &final_kinds);
    Ok(ProgramIR {
        num_qubits: a.num_qubits,
        num_bits: a.num_bits,
        qubit_regs: a.qubit_regs,
        bit_regs: a.bit_regs,
        blocks,
        measurements,
        diagnostics: Vec::new(),
    })
}

/// Convenience wrapper: parse then analyze.
pub fn parse_and_analyze(text: &str) -> Result<ProgramIR, Vec<Diagnostic>> {
    let ast = super::parser::parse(text)?;
    analyze(&ast)
}

/// What we statically know about a qubit's value at a program point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum QStatus {
    /// Known |0⟩ (initial, or reset).
    Zero,
    /// In the basis state recorded in this classical bit.
    Measured(u32),
    Unknown,
}

fn meet(a: QStatus, b: QStatus) -> QStatus {
    if a == b {
        a
    } else {
        QStatus::Unknown
    }
}

fn meet_vec(into: &mut [QStatus], other: &[QStatus]) {
    for (a, &b) in into.iter_mut().zip(other) {
        *a = meet(*a, b);
    }
}

/// Lowered statement form: resets are gone, `for` loops are unrolled, and
/// every operand is a flat index.
#[derive(Clone, Debug)]
enum NStmt {
    Gate(GateOp),
    Measure { qubit: u32, bit: u32, id: usize },
    If { cond: Condition, then_body: Vec<NStmt>, else_body: Vec<NStmt>, span: Span },
    Switch { scrutinee: BitSource, cases: Vec<(Vec<u64>, Vec<NStmt>)>, default: Vec<NStmt>, span: Span },
    While { cond: Condition, body: Vec<NStmt>, span: Span },
}

struct Analyzer {
    qubit_regs: Vec<RegInfo>,
    bit_regs: Vec<RegInfo>,
    num_qubits: u32,
    num_bits: u32,
    diags: Vec<Diagnostic>,
    next_meas_id: usize,
    /// Nonzero during dry runs of loop bodies: suppress diagnostics and id
    /// allocation while still tracking status flow.
    quiet: u32,
}

impl Analyzer {
    fn new() -> Self {
        Analyzer {
            qubit_regs: Vec::new(),
            bit_regs: Vec::new(),
            num_qubits: 0,
            num_bits: 0,
            diags: Vec::new(),
            next_meas_id: 0,
            quiet: 0,
        }
    }

    fn diag(&mut self, code: DiagnosticCode, message: String, span: Span) {
        if self.quiet == 0 {
            self.diags.push(Diagnostic::new(code, message, span));
        }
    }

    fn collect_decls(&mut self, program: &Program) {
        for s in &program.statements {
            if let Stmt::Decl { quantum, size, name, span } = s {
                let taken = self.qubit_regs.iter().any(|r| &r.name == name)
                    || self.bit_regs.iter().any(|r| &r.name == name);
                if taken {
                    self.diag(DiagnosticCode::Redeclared, format!("`{name}` is already declared"), *span);
                    continue;
                }
                let width = size.unwrap_or(1);
                let info = RegInfo {
                    name: name.clone(),
                    base: if *quantum { self.num_qubits } else { self.num_bits },
                    size: width,
                    scalar: size.is_none(),
                };
                if *quantum {
                    self.num_qubits += width;
                    self.qubit_regs.push(info);
                } else {
                    self.num_bits += width;
                    self.bit_regs.push(info);
                }
            }
        }
    }

    fn find_qubit_reg(&self, name: &str) -> Option<&RegInfo> {
        self.qubit_regs.iter().find(|r| r.name == name)
    }

    fn find_bit_reg(&self, name: &str) -> Option<&RegInfo> {
        self.bit_regs.iter().find(|r| r.name == name)
    }

    /// Resolve an operand to a single flat index within `regs`.
    fn resolve_single(&mut self, op: &Operand, quantum: bool) -> Option<u32> {
        let reg = if quantum { self.find_qubit_reg(&op.name) } else { self.find_bit_reg(&op.name) };
        let Some(reg) = reg.cloned() else {
            let kind = if quantum { "quantum" } else { "classical" };
            let other = if quantum { self.find_bit_reg(&op.name) } else { self.find_qubit_reg(&op.name) };
            let msg = if other.is_some() {
                format!("`{}` is not a {kind} register", op.name)
            } else {
                format!("`{}` is not declared", op.name)
            };
            self.diag(DiagnosticCode::Undeclared, msg, op.span);
            return None;
        };
        match op.index {
            Some(i) => {
                if i >= reg.size {
                    self.diag(
                        DiagnosticCode::BadIndex,
                        format!("index {i} out of range for `{}` of size {}", op.name, reg.size),
                        op.span,
                    );
                    return None;
                }
                Some(reg.base + i)
            }
            None => {
                if reg.size != 1 {
                    self.diag(
                        DiagnosticCode::BadIndex,
                        format!("`{}` has {} elements and needs an index here", op.name, reg.size),
                        op.span,
                    );
                    return None;
                }
                Some(reg.base)
            }
        }
    }

    fn resolve_bit_source(&mut self, op: &Operand) -> Option<BitSource> {
        let Some(reg) = self.find_bit_reg(&op.name).cloned() else {
            let msg = if self.find_qubit_reg(&op.name).is_some() {
                format!("`{}` is not a classical register", op.name)
            } else {
                format!("`{}` is not declared", op.name)
            };
            self.diag(DiagnosticCode::Undeclared, msg, op.span);
            return None;
        };
        match op.index {
            Some(i) => {
                if i >= reg.size {
                    self.diag(
                        DiagnosticCode::BadIndex,
                        format!("index {i} out of range for `{}` of size {}", op.name, reg.size),
                        op.span,
                    );
                    None
                } else {
                    Some(BitSource::Single(reg.base + i))
                }
            }
            None => {
                if reg.size == 1 {
                    Some(BitSource::Single(reg.base))
                } else {
                    Some(BitSource::Register { base: reg.base, len: reg.size })
                }
            }
        }
    }

    fn resolve_cond(&mut self, c: &Cond) -> Option<Condition> {
        let source = self.resolve_bit_source(&c.lhs)?;
        Some(Condition { source, equal: c.equal, value: c.rhs })
    }

    fn lower(&mut self, stmts: &[Stmt], statuses: &mut Vec<QStatus>, emit: bool) -> Vec<NStmt> {
        let mut out = Vec::new();
        for s in stmts {
            match s {
                Stmt::Decl { .. } => {}
                Stmt::Gate { ctrl_count, name, params, operands, span } => {
                    if let Some(g) = self.lower_gate(*ctrl_count, name, params, operands, *span) {
                        for q in g.operands() {
                            statuses[q as usize] = QStatus::Unknown;
                        }
                        if emit {
                            out.push(NStmt::Gate(g));
                        }
                    }
                }
                Stmt::Measure { qubit, bit, span, .. } => {
                    for (q, b) in self.lower_measure(qubit, bit, *span) {
                        // a rewritten bit no longer certifies any qubit
                        for st in statuses.iter_mut() {
                            if *st == QStatus::Measured(b) {
                                *st = QStatus::Unknown;
                            }
                        }
                        statuses[q as usize] = QStatus::Measured(b);
                        if emit {
                            let id = self.next_meas_id;
                            self.next_meas_id += 1;
                            out.push(NStmt::Measure { qubit: q, bit: b, id });
                        }
                    }
                }
                Stmt::Reset { qubit, span } => {
                    let Some(q) = self.resolve_single(qubit, true) else { continue };
                    match statuses[q as usize] {
                        QStatus::Zero => {}
                        QStatus::Measured(b) => {
                            if emit {
                                out.push(NStmt::If {
                                    cond: Condition { source: BitSource::Single(b), equal: true, value: 1 },
                                    then_body: vec![NStmt::Gate(GateOp::x(q))],
                                    else_body: vec![],
                                    span: *span,
                                });
                            }
                            statuses[q as usize] = QStatus::Zero;
                        }
                        QStatus::Unknown => {
                            self.diag(
                                DiagnosticCode::ResetUnknownState,
                                format!("reset on a qubit whose state is not classically known here ({})", qubit.name),
                                *span,
                            );
                        }
                    }
                }
                Stmt::If { cond, then_body, else_body, span } => {
                    let Some(cond) = self.resolve_cond(cond) else { continue };
                    let mut then_status = statuses.clone();
                    let lowered_then = self.lower(then_body, &mut then_status, emit);
                    let mut else_status = statuses.clone();
                    let lowered_else = match else_body {
                        Some(body) => self.lower(body, &mut else_status, emit),
                        None => Vec::new(),
                    };
                    meet_vec(&mut then_status, &else_status);
                    *statuses = then_status;
                    if emit {
                        out.push(NStmt::If { cond, then_body: lowered_then, else_body: lowered_else, span: *span });
                    }
                }
                Stmt::Switch { scrutinee, cases, default, span } => {
                    let Some(source) = self.resolve_bit_source(scrutinee) else { continue };
                    let mut merged: Option<Vec<QStatus>> = None;
                    let mut lowered_cases = Vec::new();
                    for (values, body) in cases {
                        let mut st = statuses.clone();
                        let lowered = self.lower(body, &mut st, emit);
                        lowered_cases.push((values.clone(), lowered));
                        match &mut merged {
                            Some(m) => meet_vec(m, &st),
                            None => merged = Some(st),
                        }
                    }
                    let lowered_default = match default {
                        Some(body) => {
                            let mut st = statuses.clone();
                            let lowered = self.lower(body, &mut st, emit);
                            match &mut merged {
                                Some(m) => meet_vec(m, &st),
                                None => merged = Some(st),
                            }
                            lowered
                        }
                        None => {
                            // fall-through path keeps the current statuses
                            match &mut merged {
                                Some(m) => meet_vec(m, statuses),
                                None => merged = Some(statuses.clone()),
                            }
                            Vec::new()
                        }
                    };
                    if let Some(m) = merged {
                        *statuses = m;
                    }
                    if emit {
                        out.push(NStmt::Switch { scrutinee: source, cases: lowered_cases, default: lowered_default, span: *span });
                    }
                }
                Stmt::For { var, lo, hi, body, span, .. } => {
                    if self.find_qubit_reg(var).is_some() || self.find_bit_reg(var).is_some() {
                        self.diag(
                            DiagnosticCode::Redeclared,
                            format!("loop variable `{var}` shadows a register"),
                            *span,
                        );
                        continue;
                    }
                    let (ForBound::Lit(lo), ForBound::Lit(hi)) = (lo, hi) else {
                        self.diag(
                            DiagnosticCode::NonStaticBounds,
                            "loop bounds must be integer literals".into(),
                            *span,
                        );
                        continue;
                    };
                    // inclusive range; empty when lo > hi
                    for _ in *lo..=*hi {
                        let mut lowered = self.lower(body, statuses, emit);
                        out.append(&mut lowered);
                    }
                }
                Stmt::While { cond, body, span } => {
                    let Some(cond) = self.resolve_cond(cond) else { continue };
                    // status fixpoint over zero or more iterations
                    let mut entry = statuses.clone();
                    self.quiet += 1;
                    loop {
                        let mut probe = entry.clone();
                        let _ = self.lower(body, &mut probe, false);
                        meet_vec(&mut probe, &entry);
                        if probe == entry {
                            break;
                        }
                        entry = probe;
                    }
                    self.quiet -= 1;
                    let mut body_status = entry.clone();
                    let lowered = self.lower(body, &mut body_status, emit);
                    *statuses = entry;
                    if emit {
                        out.push(NStmt::While { cond, body: lowered, span: *span });
                    }
                }
            }
        }
        out
    }

    fn lower_gate(
        &mut self,
        ctrl_count: u32,
        name: &str,
        params: &[String],
        operands: &[Operand],
        span: Span,
    ) -> Option<GateOp> {
        if !params.is_empty() {
            self.diag(DiagnosticCode::UnsupportedGate, format!("unsupported gate: {name}"), span);
            return None;
        }
        let mut flat = Vec::with_capacity(operands.len());
        for op in operands {
            flat.push(self.resolve_single(op, true)?);
        }
        for (i, q) in flat.iter().enumerate() {
            if flat[..i].contains(q) {
                self.diag(
                    DiagnosticCode::DuplicateOperand,
                    format!("gate `{name}` uses qubit {} twice", operands[i].name),
                    span,
                );
                return None;
            }
        }
        let arity_err = |a: &mut Self, want: usize| {
            a.diag(
                DiagnosticCode::UnsupportedGate,
                format!("gate `{name}` takes {want} operand(s), got {}", flat.len()),
                span,
            );
        };
        if ctrl_count > 0 {
            // `ctrl @` chains are supported on x and z only
            match name {
                "x" | "z" => {}
                _ => {
                    self.diag(
                        DiagnosticCode::UnsupportedModifier,
                        format!("ctrl modifier is only supported on x and z, not `{name}`"),
                        span,
                    );
                    return None;
                }
            }
            let want = ctrl_count as usize + 1;
            if flat.len() != want {
                arity_err(self, want);
                return None;
            }
            return Some(if name == "x" {
                let target = *flat.last().unwrap();
                let controls = flat[..flat.len() - 1].to_vec();
                match controls.len() {
                    1 => GateOp::cx(controls[0], target),
                    2 => GateOp::ccx(controls[0], controls[1], target),
                    _ => GateOp::mcx(controls, target),
                }
            } else if flat.len() == 2 {
                GateOp::cz(flat[0], flat[1])
            } else {
                GateOp::mcz(flat)
            });
        }
        let g = match (name, flat.len()) {
            ("x", 1) => GateOp::x(flat[0]),
            ("y", 1) => GateOp::y(flat[0]),
            ("z", 1) => GateOp::z(flat[0]),
            ("h", 1) => GateOp::h(flat[0]),
            ("s", 1) => GateOp::s(flat[0]),
            ("sdg", 1) => GateOp::sdg(flat[0]),
            ("t", 1) => GateOp::t(flat[0]),
            ("tdg", 1) => GateOp::tdg(flat[0]),
            ("cx", 2) => GateOp::cx(flat[0], flat[1]),
            ("cz", 2) => GateOp::cz(flat[0], flat[1]),
            ("swap", 2) => GateOp::swap(flat[0], flat[1]),
            ("ccx", 3) => GateOp::ccx(flat[0], flat[1], flat[2]),
            ("x" | "y" | "z" | "h" | "s" | "sdg" | "t" | "tdg", _) => {
                arity_err(self, 1);
                return None;
            }
            ("cx" | "cz" | "swap", _) => {
                arity_err(self, 2);
                return None;
            }
            ("ccx", _) => {
                arity_err(self, 3);
                return None;
            }
            _ => {
                self.diag(DiagnosticCode::UnsupportedGate, format!("unsupported gate: {name}"), span);
                return None;
            }
        };
        Some(g)
    }

    /// Expand a measure statement; registers of matching size broadcast.
    fn lower_measure(&mut self, qubit: &Operand, bit: &Operand, span: Span) -> Vec<(u32, u32)> {
        let qreg = self.find_qubit_reg(&qubit.name).cloned();
        let breg = self.find_bit_reg(&bit.name).cloned();
        match (&qreg, &breg, qubit.index, bit.index) {
            (Some(q), Some(b), None, None) if q.size > 1 || b.size > 1 => {
                if q.size != b.size {
                    self.diag(
                        DiagnosticCode::MeasureShape,
                        format!(
                            "cannot measure `{}` ({} qubits) into `{}` ({} bits)",
                            qubit.name, q.size, bit.name, b.size
                        ),
                        span,
                    );
                    return Vec::new();
                }
                (0..q.size).map(|i| (q.base + i, b.base + i)).collect()
            }
            _ => {
                let q = self.resolve_single(qubit, true);
                let b = self.resolve_single(bit, false);
                match (q, b) {
                    (Some(q), Some(b)) => vec![(q, b)],
                    _ => Vec::new(),
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Measurement classification
// ---------------------------------------------------------------------------

struct TouchEvent {
    pos: usize,
    qubit: u32,
}

struct ReadEvent {
    pos: usize,
    bits: Vec<u32>,
    /// Body ranges of loops that can re-run a write for this read.
    ranges: Vec<(usize, usize)>,
    span: Span,
}

struct WriteEvent {
    pos: usize,
    bit: u32,
}

struct MeasEvent {
    pos: usize,
    id: usize,
    qubit: u32,
    bit: u32,
    in_loop: bool,
}

#[derive(Default)]
struct Classifier {
    pos: usize,
    touches: Vec<TouchEvent>,
    reads: Vec<ReadEvent>,
    writes: Vec<WriteEvent>,
    meas: Vec<MeasEvent>,
}

impl Classifier {
    fn walk(&mut self, stmts: &[NStmt], in_loop: bool, loop_ranges: &mut Vec<(usize, usize)>) {
        for s in stmts {
            self.pos += 1;
            let pos = self.pos;
            match s {
                NStmt::Gate(g) => {
                    for q in g.operands() {
                        self.touches.push(TouchEvent { pos, qubit: q });
                    }
                }
                NStmt::Measure { qubit, bit, id } => {
                    self.touches.push(TouchEvent { pos, qubit: *qubit });
                    self.writes.push(WriteEvent { pos, bit: *bit });
                    self.meas.push(MeasEvent { pos, id: *id, qubit: *qubit, bit: *bit, in_loop });
                }
                NStmt::If { cond, then_body, else_body, span } => {
                    self.reads.push(ReadEvent {
                        pos,
                        bits: cond.source.bits(),
                        ranges: loop_ranges.clone(),
                        span: *span,
                    });
                    self.walk(then_body, in_loop, loop_ranges);
                    self.walk(else_body, in_loop, loop_ranges);
                }
                NStmt::Switch { scrutinee, cases, default, span } => {
                    self.reads.push(ReadEvent {
                        pos,
                        bits: scrutinee.bits(),
                        ranges: loop_ranges.clone(),
                        span: *span,
                    });
                    for (_, body) in cases {
                        self.walk(body, in_loop, loop_ranges);
                    }
                    self.walk(default, in_loop, loop_ranges);
                }
                NStmt::While { cond, body, span } => {
                    // measure the body's position extent with a dry count
                    let start = self.pos + 1;
                    let end = start + count_stmts(body);
                    let mut ranges = loop_ranges.clone();
                    ranges.push((start, end));
                    self.reads.push(ReadEvent {
                        pos,
                        bits: cond.source.bits(),
                        ranges: ranges.clone(),
                        span: *span,
                    });
                    self.walk(body, true, &mut ranges);
                }
            }
        }
    }
}

fn count_stmts(stmts: &[NStmt]) -> usize {
    let mut n = 0;
    for s in stmts {
        n += 1;
        match s {
            NStmt::If { then_body, else_body, .. } => {
                n += count_stmts(then_body) + count_stmts(else_body);
            }
            NStmt::Switch { cases, default, .. } => {
                for (_, body) in cases {
                    n += count_stmts(body);
                }
                n += count_stmts(default);
            }
            NStmt::While { body, .. } => n += count_stmts(body),
            _ => {}
        }
    }
    n
}

// ---------------------------------------------------------------------------
// Block tree construction
// ---------------------------------------------------------------------------

fn build_blocks(stmts: &[NStmt], kinds: &HashMap<usize, MeasureKind>) -> BlockTree {
    let mut blocks = Vec::new();
    let mut ops: Vec<Op> = Vec::new();
    for s in stmts {
        match s {
            NStmt::Gate(g) => ops.push(Op::Gate(g.clone())),
            NStmt::Measure { qubit, bit, id } => ops.push(Op::Measure {
                qubit: *qubit,
                bit: *bit,
                id: *id,
                is_final: kinds.get(id) == Some(&MeasureKind::Final),
            }),
            NStmt::If { cond, then_body, else_body, .. } => {
                flush(&mut blocks, &mut ops);
                blocks.push(Block::Dqc(Dqc::If {
                    cond: cond.clone(),
                    then_blocks: build_blocks(then_body, kinds),
                    else_blocks: build_blocks(else_body, kinds),
                }));
            }
            NStmt::Switch { scrutinee, cases, default, .. } => {
                flush(&mut blocks, &mut ops);
                blocks.push(Block::Dqc(Dqc::Switch {
                    scrutinee: scrutinee.clone(),
                    cases: cases
                        .iter()
                        .map(|(v, body)| (v.clone(), build_blocks(body, kinds)))
                        .collect(),
                    default: build_blocks(default, kinds),
                }));
            }
            NStmt::While { cond, body, .. } => {
                flush(&mut blocks, &mut ops);
                blocks.push(Block::Sqc { guard: cond.clone(), body: build_blocks(body, kinds) });
            }
        }
    }
    flush(&mut blocks, &mut ops);
    blocks
}

fn flush(blocks: &mut BlockTree, ops: &mut Vec<Op>) {
    if !ops.is_empty() {
        blocks.push(Block::Cqc(std::mem::take(ops)));
    }
}
