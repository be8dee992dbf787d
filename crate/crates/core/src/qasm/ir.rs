//! Analyzed program representation: flat registers plus a hierarchical block
//! tree.
//!
//! Blocks come in three flavors that the executor treats differently:
//! straight-line gate/measure runs (combinational), measurement-guarded
//! branching (dynamic), and guarded loops (sequential). The tree preserves
//! program order and nesting; every operation appears in exactly one
//! combinational block.

use crate::kernel::GateOp;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegInfo {
    pub name: String,
    pub base: u32,
    pub size: u32,
    /// Declared without an explicit size (`qubit q;`).
    pub scalar: bool,
}

/// Where a guard reads its value from. Register reads are little-endian:
/// bit 0 is the least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BitSource {
    Single(u32),
    Register { base: u32, len: u32 },
}

impl BitSource {
    pub fn bits(&self) -> Vec<u32> {
        match self {
            BitSource::Single(b) => vec![*b],
            BitSource::Register { base, len } => (*base..*base + *len).collect(),
        }
    }
}

/// `source == value` or `source != value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub source: BitSource,
    pub equal: bool,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Gate(GateOp),
    Measure { qubit: u32, bit: u32, id: usize, is_final: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// Straight-line operations, no classical control.
    Cqc(Vec<Op>),
    /// Branch selected by classical bits.
    Dqc(Dqc),
    /// Guarded loop; the body re-executes while the guard holds.
    Sqc { guard: Condition, body: BlockTree },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dqc {
    If { cond: Condition, then_blocks: BlockTree, else_blocks: BlockTree },
    Switch { scrutinee: BitSource, cases: Vec<(Vec<u64>, BlockTree)>, default: BlockTree },
}

pub type BlockTree = Vec<Block>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Mid,
    Final,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasurementInfo {
    pub id: usize,
    pub qubit: u32,
    pub bit: u32,
    pub kind: MeasureKind,
}

#[derive(Clone, Debug)]
pub struct ProgramIR {
    pub num_qubits: u32,
    pub num_bits: u32,
    pub qubit_regs: Vec<RegInfo>,
    pub bit_regs: Vec<RegInfo>,
    pub blocks: BlockTree,
    pub measurements: Vec<MeasurementInfo>,
    /// Non-fatal analysis notes; empty for clean programs.
    pub diagnostics: Vec<super::diag::Diagnostic>,
}

impl ProgramIR {
    /// Flatten the tree in declaration order, visiting every operation once
    /// (all guards forced); used by coverage checks.
    pub fn flatten_ops(&self) -> Vec<&Op> {
        fn walk<'a>(blocks: &'a [Block], out: &mut Vec<&'a Op>) {
            for b in blocks {
                match b {
                    Block::Cqc(ops) => out.extend(ops.iter()),
                    Block::Dqc(Dqc::If { then_blocks, else_blocks, .. }) => {
                        walk(then_blocks, out);
                        walk(else_blocks, out);
                    }
                    Block::Dqc(Dqc::Switch { cases, default, .. }) => {
                        for (_, body) in cases {
                            walk(body, out);
                        }
                        walk(default, out);
                    }
                    Block::Sqc { body, .. } => walk(body, out),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.blocks, &mut out);
        out
    }

    pub fn qubit_name(&self, q: u32) -> String {
        for reg in &self.qubit_regs {
            if q >= reg.base && q < reg.base + reg.size {
                return if reg.scalar {
                    reg.name.clone()
                } else {
                    format!("{}[{}]", reg.name, q - reg.base)
                };
            }
        }
        format!("q{q}")
    }

    pub fn bit_name(&self, b: u32) -> String {
        for reg in &self.bit_regs {
            if b >= reg.base && b < reg.base + reg.size {
                return if reg.scalar {
                    reg.name.clone()
                } else {
                    format!("{}[{}]", reg.name, b - reg.base)
                };
            }
        }
        format!("c{b}")
    }
}
