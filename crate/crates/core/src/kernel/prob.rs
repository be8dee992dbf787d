//! Measurement probabilities by weighted model counting, and the symbolic
//! measurement collapse.
//!
//! For a state window of width `n`, the unnormalized probability mass of a
//! predicate `L` is
//!
//! ```text
//! (1/2^k) · [ Σ_u S_uu(L) + √2·(S_ab(L) + S_bc(L) + S_cd(L) − S_da(L)) ]
//! ```
//!
//! with `S_uv(L) = Σ_{i,j} w_i·w_j · #sat(F[u][i] ∧ F[v][j] ∧ L)` over the
//! window variables and two's-complement weights `w_i = 2^i`,
//! `w_{r−1} = −2^{r−1}`. The diagonal terms are the component squares and the
//! cross terms come from expanding |a·ω³ + b·ω² + c·ω + d|².

use super::SymbolicState;
use crate::bdd::NodeRef;
use crate::scalar::RootTwoRational;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

impl SymbolicState {
    /// Unnormalized joint probabilities `(p0, p1)` of measuring qubit `t`.
    /// `p0 + p1 = norm_sq(self)` exactly.
    pub fn get_prob(&self, t: u32) -> (RootTwoRational, RootTwoRational) {
        assert!(
            t >= self.base() && t < self.base() + self.num_qubits(),
            "measured qubit outside the state window"
        );
        let lit0 = self.manager().literal(t, false);
        let lit1 = self.manager().literal(t, true);
        (self.wmc_sum(Some(lit0)), self.wmc_sum(Some(lit1)))
    }

    /// Weighted model count of |amplitude|² mass over indices satisfying the
    /// optional literal constraint (None = the whole window).
    pub(crate) fn wmc_sum(&self, constraint: Option<NodeRef>) -> RootTwoRational {
        let mgr = self.manager().clone();
        let r = self.bit_width();
        let weights: Vec<BigInt> = (0..r)
            .map(|i| {
                if i == r - 1 {
                    -(BigInt::from(1) << (r - 1))
                } else {
                    BigInt::from(1) << i
                }
            })
            .collect();
        // count over exactly the window variables
        let free_below = self.base();
        let universe = self.base() + self.num_qubits();
        let count = |f: NodeRef| -> BigUint { mgr.sat_count_unchecked(f, universe) >> free_below };

        let pair_sum = |u: usize, v: usize| -> BigInt {
            let mut acc = BigInt::zero();
            for i in 0..r {
                let fu = self.slice(u, i);
                if fu.is_false() {
                    continue;
                }
                for j in 0..r {
                    let fv = self.slice(v, j);
                    if fv.is_false() {
                        continue;
                    }
                    let mut conj = mgr.and(fu, fv);
                    if let Some(c) = constraint {
                        conj = mgr.and(conj, c);
                    }
                    if conj.is_false() {
                        continue;
                    }
                    acc += &weights[i] * &weights[j] * BigInt::from(count(conj));
                }
            }
            acc
        };

        let diag = pair_sum(0, 0) + pair_sum(1, 1) + pair_sum(2, 2) + pair_sum(3, 3);
        let cross = pair_sum(0, 1) + pair_sum(1, 2) + pair_sum(2, 3) - pair_sum(3, 0);
        RootTwoRational::from_ints(diag, cross).div_sqrt2_pow(2 * self.scale_exponent())
    }

    /// Project onto outcome `b` of qubit `t` without renormalizing: every
    /// slice becomes `q̃_t ∧ (F|_{q̃_t})` with `q̃_t` the literal of the
    /// outcome. The scale exponent is unchanged, so the squared norm of the
    /// result is exactly the joint probability of the outcome.
    pub fn mid_measure(&mut self, t: u32, b: bool) {
        assert!(
            t >= self.base() && t < self.base() + self.num_qubits(),
            "measured qubit outside the state window"
        );
        let mgr = self.manager().clone();
        let lit = mgr.literal(t, b);
        for comp in self.slices_mut() {
            for f in comp.iter_mut() {
                let restricted = mgr.restrict(*f, t, b);
                *f = mgr.and(lit, restricted);
            }
        }
    }
}
