//! State composition and state retention: the two operators that turn the
//! combinational engine into a sequential one.
//!
//! One loop iteration runs on `n = m + l` qubits: the external register
//! `{q0..q_{m−1}}` is freshly prepared and measured every round, the internal
//! register `{q_m..q_{n−1}}` carries quantum state between rounds.
//! Composition tensors a basis input on the external register with the
//! current internal state; retention conditions on the measured external
//! outcomes and keeps only the internal part.

use super::SymbolicState;

/// External/internal split of one iteration frame: `m` external qubits
/// `q0..q_{m−1}` followed by `l` internal qubits `q_m..q_{m+l−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterPartition {
    pub external: u32,
    pub internal: u32,
}

impl RegisterPartition {
    pub fn new(external: u32, internal: u32) -> Self {
        RegisterPartition { external, internal }
    }

    pub fn total(&self) -> u32 {
        self.external + self.internal
    }
}

impl SymbolicState {
    /// Tensor a computational basis state `|ext_bits⟩` on the external
    /// register with an internal state living at `base = ext_bits.len()`.
    /// Every slice becomes `minterm(ext) ∧ F_in`; `k` is unchanged.
    ///
    /// Non-basis external inputs are handled by applying a preparatory
    /// external-only gate list *after* composition.
    pub fn compose(ext_bits: &[bool], internal: &SymbolicState) -> SymbolicState {
        let m = ext_bits.len() as u32;
        if m == 0 {
            return internal.clone();
        }
        let mgr = internal.manager().clone();
        assert_eq!(internal.base(), m, "internal window must start after the external register");
        // support check: internal slices must not mention external variables
        for u in 0..4 {
            for i in 0..internal.bit_width() {
                let f = internal.slice(u, i);
                if let Some(min_var) = mgr.support_min(f) {
                    assert!(min_var >= m, "internal slice mentions external variable q{min_var}");
                }
            }
        }
        let minterm = mgr.minterm(0, ext_bits);
        let mut slices: [Vec<crate::bdd::NodeRef>; 4] = Default::default();
        for u in 0..4 {
            slices[u] = (0..internal.bit_width())
                .map(|i| mgr.and(minterm, internal.slice(u, i)))
                .collect();
        }
        let n = m + internal.num_qubits();
        SymbolicState::with_parts(mgr, internal.scale_exponent(), slices, 0, n)
    }

    /// Condition on measured outcomes of the external register and keep the
    /// internal part: every slice is cofactored by the outcome literals
    /// (no literal conjunction, unlike `mid_measure`), so the result's
    /// support excludes the external variables. `k` is unchanged, and the
    /// squared norm of the result is the joint probability mass of the
    /// outcome pattern.
    pub fn retain(&self, outcomes: &[bool]) -> SymbolicState {
        let m = outcomes.len() as u32;
        assert!(m <= self.num_qubits(), "more outcomes than qubits");
        let mgr = self.manager().clone();
        let base = self.base();
        let assignment: Vec<(u32, bool)> = outcomes
            .iter()
            .enumerate()
            .map(|(j, &b)| (base + j as u32, b))
            .collect();
        let mut slices: [Vec<crate::bdd::NodeRef>; 4] = Default::default();
        for u in 0..4 {
            slices[u] = (0..self.bit_width())
                .map(|i| mgr.cofactor(self.slice(u, i), &assignment))
                .collect();
        }
        SymbolicState::with_parts(
            mgr,
            self.scale_exponent(),
            slices,
            base + m,
            self.num_qubits() - m,
        )
    }
}
