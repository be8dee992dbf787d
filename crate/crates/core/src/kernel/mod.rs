//! The symbolic quantum state engine.
//!
//! A state on `n` qubits is a scale exponent `k` plus `4·r` Boolean functions:
//! the amplitude at basis index `x` is
//!
//! ```text
//! α_x = (1/√2^k) · (a_x·ω³ + b_x·ω² + c_x·ω + d_x)
//! ```
//!
//! where each integer component `u_x` is read from `r` two's-complement bit
//! slices: `u_x = −2^{r−1}·F[u][r−1](x) + Σ_{i<r−1} 2^i·F[u][i](x)`, and every
//! slice `F[u][i]` is a BDD over the index variables. Gates become Boolean
//! updates of the slices; measurement probabilities are weighted model counts.
//!
//! Basis index convention: `q0` is the most significant bit of the index, so
//! the bitstring `"10"` is the state `|10⟩` with `q0 = 1, q1 = 0`.

mod gates;
mod prob;
mod seq;

pub use seq::RegisterPartition;

use crate::bdd::{BddManager, NodeRef};
use crate::scalar::{OmegaInt, RootTwoRational};
use num_bigint::BigInt;
use serde_json::json;
use std::rc::Rc;
use thiserror::Error;

/// Default cap for amplitude extraction; 2^n entries get expensive fast.
pub const DEFAULT_EXTRACT_LIMIT: u32 = 20;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("basis index length {got} does not match qubit count {want}")]
    LengthMismatch { want: u32, got: usize },
    #[error("extraction limit exceeded: {n} qubits > limit {limit}")]
    ExtractLimit { n: u32, limit: u32 },
}

/// Gate names of the supported set. Multi-controlled X and Z are native:
/// both reduce to Clifford+T in principle, but in this encoding they are a
/// single substitution or conditional negation, so decomposing them would
/// only add work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cx,
    Cz,
    Swap,
    Ccx,
    Mcx,
    Mcz,
}

/// One gate application. `controls` is empty for uncontrolled gates; the
/// Z-family stores all operands in `targets` (a phase gate has no
/// distinguished target).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOp {
    pub kind: GateKind,
    pub controls: Vec<u32>,
    pub targets: Vec<u32>,
}

impl GateOp {
    fn single(kind: GateKind, t: u32) -> Self {
        GateOp { kind, controls: vec![], targets: vec![t] }
    }

    pub fn x(t: u32) -> Self {
        Self::single(GateKind::X, t)
    }
    pub fn y(t: u32) -> Self {
        Self::single(GateKind::Y, t)
    }
    pub fn z(t: u32) -> Self {
        Self::single(GateKind::Z, t)
    }
    pub fn h(t: u32) -> Self {
        Self::single(GateKind::H, t)
    }
    pub fn s(t: u32) -> Self {
        Self::single(GateKind::S, t)
    }
    pub fn sdg(t: u32) -> Self {
        Self::single(GateKind::Sdg, t)
    }
    pub fn t(t: u32) -> Self {
        Self::single(GateKind::T, t)
    }
    pub fn tdg(t: u32) -> Self {
        Self::single(GateKind::Tdg, t)
    }
    pub fn cx(c: u32, t: u32) -> Self {
        GateOp { kind: GateKind::Cx, controls: vec![c], targets: vec![t] }
    }
    pub fn ccx(c1: u32, c2: u32, t: u32) -> Self {
        GateOp { kind: GateKind::Ccx, controls: vec![c1, c2], targets: vec![t] }
    }
    pub fn mcx(controls: Vec<u32>, t: u32) -> Self {
        GateOp { kind: GateKind::Mcx, controls, targets: vec![t] }
    }
    pub fn cz(a: u32, b: u32) -> Self {
        GateOp { kind: GateKind::Cz, controls: vec![], targets: vec![a, b] }
    }
    pub fn mcz(qubits: Vec<u32>) -> Self {
        GateOp { kind: GateKind::Mcz, controls: vec![], targets: qubits }
    }
    pub fn swap(a: u32, b: u32) -> Self {
        GateOp { kind: GateKind::Swap, controls: vec![], targets: vec![a, b] }
    }

    /// All operands (controls before targets).
    pub fn operands(&self) -> impl Iterator<Item = u32> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    /// Check arity, range, and operand distinctness.
    pub fn validate(&self, n: u32) -> Result<(), String> {
        use GateKind::*;
        let (nc, nt) = (self.controls.len(), self.targets.len());
        let arity_ok = match self.kind {
            X | Y | Z | H | S | Sdg | T | Tdg => nc == 0 && nt == 1,
            Cx => nc == 1 && nt == 1,
            Ccx => nc == 2 && nt == 1,
            Mcx => nc >= 1 && nt == 1,
            Cz => nc == 0 && nt == 2,
            Mcz => nc == 0 && nt >= 2,
            Swap => nc == 0 && nt == 2,
        };
        if !arity_ok {
            return Err(format!("bad operand count for {:?}", self.kind));
        }
        let mut seen = std::collections::HashSet::new();
        for q in self.operands() {
            if q >= n {
                return Err(format!("qubit {q} out of range (n = {n})"));
            }
            if !seen.insert(q) {
                return Err(format!("duplicate operand qubit {q}"));
            }
        }
        Ok(())
    }
}

/// Component order: coefficients of ω³, ω², ω, 1.
pub(crate) const COMP_A: usize = 0;
pub(crate) const COMP_B: usize = 1;
pub(crate) const COMP_C: usize = 2;
pub(crate) const COMP_D: usize = 3;

/// Bit-sliced symbolic state bound to one [`BddManager`].
///
/// The state occupies the variable window `[base, base+n)`; a freshly
/// initialised program state has `base = 0`, while the internal state carried
/// between sequential-circuit iterations lives at `base = m` (past the
/// external register). Cloning is cheap: slices are handles into the shared
/// manager.
#[derive(Clone)]
pub struct SymbolicState {
    mgr: Rc<BddManager>,
    k: u32,
    /// `slices[u][i]` is bit `i` of component `u`; all four have equal length.
    slices: [Vec<NodeRef>; 4],
    base: u32,
    n: u32,
}

impl std::fmt::Debug for SymbolicState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolicState")
            .field("n", &self.n)
            .field("base", &self.base)
            .field("k", &self.k)
            .field("r", &self.bit_width())
            .finish()
    }
}

impl SymbolicState {
    /// The computational basis state `|bits⟩` on the window
    /// `[base, base+bits.len())`, with `k = 0` and bit-width `r = 2`.
    pub fn basis(mgr: Rc<BddManager>, base: u32, bits: &[bool]) -> Self {
        let n = bits.len() as u32;
        assert!(n >= 1, "need at least one qubit");
        assert!(base + n <= mgr.num_vars(), "window exceeds manager variables");
        let minterm = mgr.minterm(base, bits);
        let f = mgr.false_node();
        let slices = [vec![f, f], vec![f, f], vec![f, f], vec![minterm, f]];
        SymbolicState { mgr, k: 0, slices, base, n }
    }

    /// Parse a `"0101"` style index; errors on length mismatch.
    pub fn basis_from_str(mgr: Rc<BddManager>, base: u32, n: u32, index: &str) -> Result<Self, KernelError> {
        let bits = bits_from_str(index);
        if bits.len() != n as usize {
            return Err(KernelError::LengthMismatch { want: n, got: bits.len() });
        }
        Ok(Self::basis(mgr, base, &bits))
    }

    pub fn manager(&self) -> &Rc<BddManager> {
        &self.mgr
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn scale_exponent(&self) -> u32 {
        self.k
    }

    /// Current bit-width of the two's-complement slices.
    pub fn bit_width(&self) -> usize {
        self.slices[0].len()
    }

    pub fn slice(&self, comp: usize, i: usize) -> NodeRef {
        self.slices[comp][i]
    }

    /// Slice of the ω⁰ (rational-part) component; the one most tests inspect.
    pub fn d_slice(&self, i: usize) -> NodeRef {
        self.slices[COMP_D][i]
    }

    /// True if every slice is FALSE (the zero vector).
    pub fn is_zero(&self) -> bool {
        self.slices.iter().flatten().all(|f| f.is_false())
    }

    /// Sign-extend every component up to `r` slices (used to honor an
    /// explicit initial bit-width larger than 2).
    pub fn widen_to(&mut self, r: usize) {
        while self.bit_width() < r {
            self.sign_extend_one();
        }
    }

    pub(crate) fn sign_extend_one(&mut self) {
        for comp in &mut self.slices {
            let top = *comp.last().expect("nonempty slices");
            comp.push(top);
        }
    }

    pub(crate) fn slices_mut(&mut self) -> &mut [Vec<NodeRef>; 4] {
        &mut self.slices
    }

    pub(crate) fn bump_k(&mut self) {
        self.k += 1;
    }

    pub(crate) fn with_parts(mgr: Rc<BddManager>, k: u32, slices: [Vec<NodeRef>; 4], base: u32, n: u32) -> Self {
        SymbolicState { mgr, k, slices, base, n }
    }

    /// Normal-form maintenance: drop redundant sign slices and shift out
    /// all-even factors into the scale exponent. Amplitudes are unchanged.
    pub fn reduce(&mut self) {
        loop {
            let r = self.bit_width();
            if r > 2 && self.slices.iter().all(|c| c[r - 1] == c[r - 2]) {
                for comp in &mut self.slices {
                    comp.pop();
                }
                continue;
            }
            if self.k >= 2 && self.slices.iter().all(|c| c[0].is_false()) {
                for comp in &mut self.slices {
                    comp.remove(0);
                }
                if self.bit_width() < 2 {
                    self.sign_extend_one();
                }
                self.k -= 2;
                continue;
            }
            break;
        }
    }

    /// Evaluate the amplitude components at one window index.
    pub fn amp_at(&self, window_bits: &[bool]) -> OmegaInt {
        assert_eq!(window_bits.len(), self.n as usize);
        let mut full = vec![false; self.mgr.num_vars() as usize];
        full[self.base as usize..(self.base + self.n) as usize].copy_from_slice(window_bits);
        let comp = |u: usize| -> BigInt {
            let r = self.bit_width();
            let mut v = BigInt::from(0);
            for i in 0..r {
                if self.mgr.eval(self.slices[u][i], &full) {
                    if i == r - 1 {
                        v -= BigInt::from(1) << (r - 1);
                    } else {
                        v += BigInt::from(1) << i;
                    }
                }
            }
            v
        };
        OmegaInt { a: comp(COMP_A), b: comp(COMP_B), c: comp(COMP_C), d: comp(COMP_D) }
    }

    /// All nonzero amplitudes as (window index bits, components), sorted by
    /// index. Bounded: refuses windows wider than `limit`.
    pub fn extract_amplitudes(&self, limit: u32) -> Result<Vec<(Vec<bool>, OmegaInt)>, KernelError> {
        if self.n > limit {
            return Err(KernelError::ExtractLimit { n: self.n, limit });
        }
        // The union of all slices covers every index with a nonzero component.
        let mut nonzero = self.mgr.false_node();
        for f in self.slices.iter().flatten() {
            nonzero = self.mgr.or(nonzero, *f);
        }
        let mut out = Vec::new();
        if nonzero.is_false() {
            return Ok(out);
        }
        self.mgr.foreach_sat(nonzero, self.base, self.n, &mut |bits| {
            let amp = self.amp_at(bits);
            if !amp.is_zero() {
                out.push((bits.to_vec(), amp));
            }
        });
        Ok(out)
    }

    /// JSON dump of the state for small windows.
    pub fn dump_json(&self, limit: u32) -> Result<serde_json::Value, KernelError> {
        let amps = self.extract_amplitudes(limit)?;
        let amps_json: Vec<_> = amps
            .iter()
            .map(|(bits, v)| {
                json!({
                    "index": bits_to_string(bits),
                    "a": v.a.to_string(),
                    "b": v.b.to_string(),
                    "c": v.c.to_string(),
                    "d": v.d.to_string(),
                })
            })
            .collect();
        let norm = self.norm_sq();
        Ok(json!({
            "n": self.n,
            "k": self.k,
            "r": self.bit_width(),
            "amplitudes": amps_json,
            "norm_sq": { "p": norm.p.to_string(), "q": norm.q.to_string() },
        }))
    }

    /// Engine statistics for reporting.
    pub fn stats(&self) -> StateStats {
        let slice_nodes = self.slices.iter().flatten().map(|&f| self.mgr.dag_size(f)).sum();
        StateStats {
            peak_nodes: self.mgr.node_count(),
            slice_nodes,
            wmc_count_calls: self.mgr.count_calls(),
        }
    }

    /// Exact equality of encoded amplitudes (same window width required).
    /// Intended for small-n tests; compares extracted amplitude maps after
    /// reducing both sides.
    pub fn amplitude_eq(&self, other: &SymbolicState) -> bool {
        assert_eq!(self.n, other.n);
        let mut a = self.clone();
        let mut b = other.clone();
        a.reduce();
        b.reduce();
        if a.k != b.k {
            return false;
        }
        let ea = a.extract_amplitudes(DEFAULT_EXTRACT_LIMIT).expect("window too wide");
        let eb = b.extract_amplitudes(DEFAULT_EXTRACT_LIMIT).expect("window too wide");
        ea == eb
    }

    /// Unnormalized squared norm Σ_x |α_x|², exact.
    pub fn norm_sq(&self) -> RootTwoRational {
        self.wmc_sum(None)
    }
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct StateStats {
    pub peak_nodes: usize,
    pub slice_nodes: usize,
    pub wmc_count_calls: u64,
}

/// `"0110"` → bit vector; characters other than `'0'`/`'1'` panic.
pub fn bits_from_str(s: &str) -> Vec<bool> {
    s.chars()
        .map(|c| match c {
            '0' => false,
            '1' => true,
            _ => panic!("bad bit character {c:?}"),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Index → bits with `q0` as the most significant bit.
pub fn index_to_bits(index: u64, n: u32) -> Vec<bool> {
    (0..n).map(|v| (index >> (n - 1 - v)) & 1 == 1).collect()
}

pub fn bits_to_index(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
}
