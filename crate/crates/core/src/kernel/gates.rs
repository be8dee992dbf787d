//! Boolean gate-update rules for the bit-sliced state.
//!
//! Index-permutation gates (X, SWAP, CX/CCX/MCX) are simultaneous
//! substitutions on every slice. Phase gates (Z-family, S/T family) are
//! conditional component rotations with two's-complement negation where a
//! sign flips. H is the only gate that mixes amplitudes across indices: it
//! adds/subtracts the two target cofactors with a ripple-carry bit-sliced
//! adder and bumps the scale exponent.
//!
//! Width discipline: sign-extend by exactly one slice before any addition or
//! negation (one guard slice is enough for a single add), then `reduce()`
//! reclaims redundant slices.

use super::{GateKind, GateOp, SymbolicState, COMP_A, COMP_B, COMP_C, COMP_D};
use crate::bdd::{BddManager, NodeRef};

/// Ripple-carry sum of two equal-width slice vectors, modulo 2^width.
fn ripple_add(m: &BddManager, xs: &[NodeRef], ys: &[NodeRef], carry_in: NodeRef) -> Vec<NodeRef> {
    debug_assert_eq!(xs.len(), ys.len());
    let mut out = Vec::with_capacity(xs.len());
    let mut carry = carry_in;
    for (&x, &y) in xs.iter().zip(ys) {
        let xy = m.xor(x, y);
        out.push(m.xor(xy, carry));
        let gen = m.and(x, y);
        let prop = m.and(carry, xy);
        carry = m.or(gen, prop);
    }
    out
}

/// Conditional two's-complement negation: value −x where `guard` holds and x
/// elsewhere. Sign-extends by one slice, flips the slices under the guard,
/// then adds the guard bit at the least significant position.
fn negate_under(m: &BddManager, xs: &[NodeRef], guard: NodeRef) -> Vec<NodeRef> {
    let mut ext: Vec<NodeRef> = xs.to_vec();
    ext.push(*xs.last().expect("nonempty slices"));
    let mut out = Vec::with_capacity(ext.len());
    let mut carry = guard;
    for &x in &ext {
        let flipped = m.xor(x, guard);
        out.push(m.xor(flipped, carry));
        carry = m.and(flipped, carry);
    }
    out
}

/// Plain sign extension by one slice.
fn extend_one(xs: &[NodeRef]) -> Vec<NodeRef> {
    let mut ext = xs.to_vec();
    ext.push(*xs.last().expect("nonempty slices"));
    ext
}

impl SymbolicState {
    /// Apply one gate; the state then encodes `U·ψ` exactly.
    pub fn apply_gate(&mut self, g: &GateOp) {
        g.validate(self.mgr.num_vars()).expect("invalid gate operands");
        match g.kind {
            GateKind::X | GateKind::Cx | GateKind::Ccx | GateKind::Mcx => {
                let t = g.targets[0];
                let controls = self.positive_cube(&g.controls);
                let qt = self.mgr.variable(t);
                let sub = self.mgr.xor(qt, controls.unwrap_or_else(|| self.mgr.true_node()));
                // with no controls the cube is TRUE and q_t ⊕ TRUE = ¬q_t
                self.apply_subst(&[(t, sub)]);
            }
            GateKind::Swap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                let (qa, qb) = (self.mgr.variable(a), self.mgr.variable(b));
                self.apply_subst(&[(a, qb), (b, qa)]);
            }
            GateKind::Z | GateKind::Cz | GateKind::Mcz => {
                let guard = self
                    .positive_cube(&g.targets)
                    .expect("Z-family gate needs at least one operand");
                self.conditional_negate(guard);
            }
            GateKind::S => self.phase_rotate(g.targets[0], Rotation::S),
            GateKind::Sdg => self.phase_rotate(g.targets[0], Rotation::Sdg),
            GateKind::T => self.phase_rotate(g.targets[0], Rotation::T),
            GateKind::Tdg => self.phase_rotate(g.targets[0], Rotation::Tdg),
            GateKind::H => self.hadamard(g.targets[0]),
            GateKind::Y => self.pauli_y(g.targets[0]),
        }
    }

    pub fn apply_all(&mut self, gates: &[GateOp]) {
        for g in gates {
            self.apply_gate(g);
        }
    }

    /// Conjunction of the positive literals of `qubits`; None when empty.
    fn positive_cube(&self, qubits: &[u32]) -> Option<NodeRef> {
        if qubits.is_empty() {
            return None;
        }
        let lits: Vec<(u32, bool)> = qubits.iter().map(|&q| (q, true)).collect();
        Some(self.mgr.cube(&lits))
    }

    fn apply_subst(&mut self, map: &[(u32, NodeRef)]) {
        let mgr = self.mgr.clone();
        for comp in self.slices_mut() {
            for f in comp.iter_mut() {
                *f = mgr.substitute(*f, map);
            }
        }
    }

    /// Two's-complement negation of all four components where `guard` holds.
    fn conditional_negate(&mut self, guard: NodeRef) {
        let mgr = self.mgr.clone();
        for comp in self.slices_mut() {
            *comp = negate_under(&mgr, comp, guard);
        }
        self.reduce();
    }

    fn hadamard(&mut self, t: u32) {
        let mgr = self.mgr.clone();
        self.sign_extend_one();
        let qt = mgr.variable(t);
        let f0 = mgr.false_node();
        let t1 = mgr.true_node();
        for comp in self.slices_mut() {
            let x: Vec<NodeRef> = comp.iter().map(|&f| mgr.restrict(f, t, false)).collect();
            let y: Vec<NodeRef> = comp.iter().map(|&f| mgr.restrict(f, t, true)).collect();
            let plus = ripple_add(&mgr, &x, &y, f0);
            let y_inv: Vec<NodeRef> = y.iter().map(|&f| mgr.negate(f)).collect();
            let minus = ripple_add(&mgr, &x, &y_inv, t1);
            *comp = minus
                .iter()
                .zip(&plus)
                .map(|(&mi, &pl)| mgr.ite(qt, mi, pl))
                .collect();
        }
        self.bump_k();
        self.reduce();
    }

    /// ite-assemble per component: rotated slices under the guard, the
    /// sign-extended originals elsewhere.
    fn phase_rotate(&mut self, t: u32, rot: Rotation) {
        let mgr = self.mgr.clone();
        let g = mgr.variable(t);
        let slices = self.slices_mut();
        let ext: Vec<Vec<NodeRef>> = slices.iter().map(|c| extend_one(c)).collect();
        let neg = |u: usize| negate_under(&mgr, &slices[u], g);
        // component images under multiplication by i, −i, ω, ω⁻¹
        let rotated: [Vec<NodeRef>; 4] = match rot {
            Rotation::S => [ext[COMP_C].clone(), ext[COMP_D].clone(), neg(COMP_A), neg(COMP_B)],
            Rotation::Sdg => [neg(COMP_C), neg(COMP_D), ext[COMP_A].clone(), ext[COMP_B].clone()],
            Rotation::T => [ext[COMP_B].clone(), ext[COMP_C].clone(), ext[COMP_D].clone(), neg(COMP_A)],
            Rotation::Tdg => [neg(COMP_D), ext[COMP_A].clone(), ext[COMP_B].clone(), ext[COMP_C].clone()],
        };
        for u in 0..4 {
            slices[u] = rotated[u]
                .iter()
                .zip(&ext[u])
                .map(|(&r, &e)| mgr.ite(g, r, e))
                .collect();
        }
        self.reduce();
    }

    /// Y: the new q_t=1 cofactor is i·(old q_t=0 cofactor) and the new
    /// q_t=0 cofactor is −i·(old q_t=1 cofactor).
    fn pauli_y(&mut self, t: u32) {
        let mgr = self.mgr.clone();
        let qt = mgr.variable(t);
        let t1 = mgr.true_node();
        let slices = self.slices_mut();
        let x: Vec<Vec<NodeRef>> = slices
            .iter()
            .map(|c| c.iter().map(|&f| mgr.restrict(f, t, false)).collect())
            .collect();
        let y: Vec<Vec<NodeRef>> = slices
            .iter()
            .map(|c| c.iter().map(|&f| mgr.restrict(f, t, true)).collect())
            .collect();
        // i·x: (a,b,c,d) → (c,d,−a,−b); −i·y: (a,b,c,d) → (−c,−d,a,b)
        let hi: [Vec<NodeRef>; 4] = [
            extend_one(&x[COMP_C]),
            extend_one(&x[COMP_D]),
            negate_under(&mgr, &x[COMP_A], t1),
            negate_under(&mgr, &x[COMP_B], t1),
        ];
        let lo: [Vec<NodeRef>; 4] = [
            negate_under(&mgr, &y[COMP_C], t1),
            negate_under(&mgr, &y[COMP_D], t1),
            extend_one(&y[COMP_A]),
            extend_one(&y[COMP_B]),
        ];
        for u in 0..4 {
            slices[u] = hi[u]
                .iter()
                .zip(&lo[u])
                .map(|(&h, &l)| mgr.ite(qt, h, l))
                .collect();
        }
        self.reduce();
    }
}

enum Rotation {
    S,
    Sdg,
    T,
    Tdg,
}
