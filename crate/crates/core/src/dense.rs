//! Exact dense reference simulator: all 2^n amplitudes in ℤ\[ω\] with a shared
//! scale exponent. Deliberately naive — no optimization whatsoever — so that
//! it is obviously correct. Used as the brute-force oracle everywhere the
//! symbolic engine needs independent confirmation.

use crate::kernel::{bits_to_index, index_to_bits, GateKind, GateOp};
use crate::scalar::{OmegaInt, RootTwoRational};

pub const MAX_QUBITS: u32 = 14;

/// Amplitudes at index `x` are `entries[x] / √2^k`, with the same index
/// convention as the symbolic state (`q0` is the most significant bit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseState {
    pub n: u32,
    pub k: u32,
    pub entries: Vec<OmegaInt>,
}

impl DenseState {
    pub fn basis(n: u32, index_bits: &[bool]) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n), "dense oracle is capped at {MAX_QUBITS} qubits");
        assert_eq!(index_bits.len(), n as usize);
        let mut entries = vec![OmegaInt::zero(); 1 << n];
        entries[bits_to_index(index_bits) as usize] = OmegaInt::one();
        DenseState { n, k: 0, entries }
    }

    fn bit_mask(&self, qubit: u32) -> usize {
        1usize << (self.n - 1 - qubit)
    }

    fn controls_set(&self, idx: usize, controls: &[u32]) -> bool {
        controls.iter().all(|&c| idx & self.bit_mask(c) != 0)
    }

    /// Textbook matrix action of one gate.
    pub fn apply(&mut self, g: &GateOp) {
        g.validate(self.n).expect("invalid gate operands");
        match g.kind {
            GateKind::X | GateKind::Cx | GateKind::Ccx | GateKind::Mcx => {
                let t = self.bit_mask(g.targets[0]);
                for idx in 0..self.entries.len() {
                    if idx & t == 0 && self.controls_set(idx, &g.controls) {
                        self.entries.swap(idx, idx | t);
                    }
                }
            }
            GateKind::Swap => {
                let (a, b) = (self.bit_mask(g.targets[0]), self.bit_mask(g.targets[1]));
                for idx in 0..self.entries.len() {
                    if idx & a != 0 && idx & b == 0 {
                        self.entries.swap(idx, (idx & !a) | b);
                    }
                }
            }
            GateKind::Z | GateKind::Cz | GateKind::Mcz => {
                for idx in 0..self.entries.len() {
                    if g.targets.iter().all(|&q| idx & self.bit_mask(q) != 0) {
                        self.entries[idx] = -&self.entries[idx];
                    }
                }
            }
            GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg => {
                let e = match g.kind {
                    GateKind::S => 2,
                    GateKind::Sdg => 6,
                    GateKind::T => 1,
                    _ => 7,
                };
                let t = self.bit_mask(g.targets[0]);
                for idx in 0..self.entries.len() {
                    if idx & t != 0 {
                        self.entries[idx] = self.entries[idx].times_omega_pow(e);
                    }
                }
            }
            GateKind::Y => {
                let t = self.bit_mask(g.targets[0]);
                for idx in 0..self.entries.len() {
                    if idx & t == 0 {
                        let lo = self.entries[idx].clone();
                        let hi = self.entries[idx | t].clone();
                        // |0⟩ ↦ i|1⟩, |1⟩ ↦ −i|0⟩
                        self.entries[idx] = (-&hi).times_i();
                        self.entries[idx | t] = lo.times_i();
                    }
                }
            }
            GateKind::H => {
                let t = self.bit_mask(g.targets[0]);
                for idx in 0..self.entries.len() {
                    if idx & t == 0 {
                        let lo = self.entries[idx].clone();
                        let hi = self.entries[idx | t].clone();
                        self.entries[idx] = &lo + &hi;
                        self.entries[idx | t] = &lo - &hi;
                    }
                }
                self.k += 1;
            }
        }
    }

    pub fn apply_all(&mut self, gates: &[GateOp]) {
        for g in gates {
            self.apply(g);
        }
    }

    /// Unnormalized joint probabilities of qubit `t`, by direct summation
    /// over the two index halves.
    pub fn probs(&self, t: u32) -> (RootTwoRational, RootTwoRational) {
        let mask = self.bit_mask(t);
        let mut p0 = RootTwoRational::zero();
        let mut p1 = RootTwoRational::zero();
        for (idx, amp) in self.entries.iter().enumerate() {
            let sq = amp.sq_norm();
            if idx & mask == 0 {
                p0 = &p0 + &sq;
            } else {
                p1 = &p1 + &sq;
            }
        }
        (
            p0.div_sqrt2_pow(2 * self.k),
            p1.div_sqrt2_pow(2 * self.k),
        )
    }

    /// Unnormalized projection: zero the half inconsistent with outcome `b`.
    pub fn measure(&mut self, t: u32, b: bool) {
        let mask = self.bit_mask(t);
        for idx in 0..self.entries.len() {
            if (idx & mask != 0) != b {
                self.entries[idx] = OmegaInt::zero();
            }
        }
    }

    pub fn norm_sq(&self) -> RootTwoRational {
        let mut total = RootTwoRational::zero();
        for amp in &self.entries {
            total = &total + &amp.sq_norm();
        }
        total.div_sqrt2_pow(2 * self.k)
    }

    /// Same normal form as the symbolic `reduce`: divide out factors of two
    /// while every component is even and `k ≥ 2`.
    pub fn reduce(&mut self) {
        while self.k >= 2 && self.entries.iter().all(|v| v.all_even()) {
            for v in &mut self.entries {
                *v = v.halve();
            }
            self.k -= 2;
        }
    }

    /// Nonzero amplitudes as (index bits, components), sorted by index.
    pub fn nonzero(&self) -> Vec<(Vec<bool>, OmegaInt)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(idx, v)| (index_to_bits(idx as u64, self.n), v.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::bits_from_str;

    #[test]
    fn hadamard_on_zero() {
        let mut s = DenseState::basis(1, &[false]);
        s.apply(&GateOp::h(0));
        assert_eq!(s.k, 1);
        assert_eq!(s.entries, vec![OmegaInt::one(), OmegaInt::one()]);
    }

    #[test]
    fn t_on_one_is_omega() {
        let mut s = DenseState::basis(1, &[true]);
        s.apply(&GateOp::t(0));
        assert_eq!(s.entries[1], OmegaInt::omega_pow(1));
    }

    #[test]
    fn bell_probs_and_projection() {
        let mut s = DenseState::basis(2, &bits_from_str("00"));
        s.apply(&GateOp::h(0));
        s.apply(&GateOp::cx(0, 1));
        let (p0, p1) = s.probs(0);
        assert_eq!(p0, RootTwoRational::from_ratio(1, 2));
        assert_eq!(p1, RootTwoRational::from_ratio(1, 2));
        s.measure(0, true);
        assert_eq!(s.norm_sq(), RootTwoRational::from_ratio(1, 2));
    }

    #[test]
    fn impossible_outcome_gives_zero_state() {
        let mut s = DenseState::basis(1, &[false]);
        s.measure(0, true);
        assert!(s.entries.iter().all(|v| v.is_zero()));
        assert!(s.norm_sq().is_zero());
    }

    #[test]
    fn inverse_sequence_restores_initial() {
        use GateKind::*;
        let mut rng_state = 0xdead_beefu64;
        let mut next = || {
            // small xorshift; deterministic gate picks
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        let n = 4;
        let mut gates = Vec::new();
        for _ in 0..30 {
            let t = (next() % n as u64) as u32;
            let c = (t + 1 + (next() % (n as u64 - 1)) as u32) % n;
            let g = match next() % 8 {
                0 => GateOp::x(t),
                1 => GateOp::y(t),
                2 => GateOp::z(t),
                3 => GateOp::h(t),
                4 => GateOp::s(t),
                5 => GateOp::t(t),
                6 => GateOp::cx(c, t),
                _ => GateOp::cz(c, t),
            };
            gates.push(g);
        }
        let init = DenseState::basis(n, &bits_from_str("0110"));
        let mut s = init.clone();
        s.apply_all(&gates);
        // apply the inverse sequence
        for g in gates.iter().rev() {
            let inv = match g.kind {
                S => GateOp::sdg(g.targets[0]),
                Sdg => GateOp::s(g.targets[0]),
                T => GateOp::tdg(g.targets[0]),
                Tdg => GateOp::t(g.targets[0]),
                _ => g.clone(),
            };
            s.apply(&inv);
        }
        s.reduce();
        let mut expect = init;
        expect.reduce();
        assert_eq!(s, expect);
    }
}
