//! Reduced ordered binary decision diagrams with hash consing.
//!
//! A [`BddManager`] owns all nodes for a fixed set of boolean variables
//! (one per qubit, `q0 < q1 < … < q_{n−1}` in a static order). Semantically
//! equal functions are always represented by the identical [`NodeRef`], so
//! equality checks are reference comparisons. The operation set is exactly
//! what the symbolic kernel needs: binary combinators, negation, cofactoring,
//! simultaneous substitution, and arbitrary-precision model counting.
//!
//! Managers are single-owner: no concurrent mutation. Independent managers
//! may run in parallel workers; nodes are never shared across managers.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::{BuildHasherDefault, Hasher};

/// Handle to a node inside one manager. Valid only within the owning
/// manager; reference equality is semantic equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    mgr: u32,
    idx: u32,
}

impl NodeRef {
    pub fn is_false(&self) -> bool {
        self.idx == FALSE_IDX
    }

    pub fn is_true(&self) -> bool {
        self.idx == TRUE_IDX
    }

    pub fn is_const(&self) -> bool {
        self.idx <= TRUE_IDX
    }
}

const FALSE_IDX: u32 = 0;
const TRUE_IDX: u32 = 1;
/// Variable tag for terminal nodes; sorts after every real variable.
const TERM_VAR: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    var: u32,
    low: u32,
    high: u32,
}

/// A small multiplicative hasher; the default SipHash is measurably slower
/// on the hot unique-table and cache lookups.
#[derive(Default)]
pub struct FxHasher {
    state: u64,
}

impl Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.state
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u8(b);
        }
    }

    fn write_u8(&mut self, i: u8) {
        self.write_u64(i as u64);
    }

    fn write_u32(&mut self, i: u32) {
        self.write_u64(i as u64);
    }

    fn write_u64(&mut self, i: u64) {
        self.state = (self.state.rotate_left(5) ^ i).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_usize(&mut self, i: usize) {
        self.write_u64(i as u64);
    }
}

type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
}

static NEXT_MANAGER_ID: std::sync::atomic::AtomicU32 = std::sync::atomic::AtomicU32::new(0);

/// Canonicalizing node store plus operation caches over a fixed variable
/// order. All operations take `&self`; interior mutability keeps the call
/// sites free of borrow gymnastics while still being single-threaded.
pub struct BddManager {
    id: u32,
    num_vars: u32,
    nodes: RefCell<Vec<Node>>,
    unique: RefCell<FxMap<(u32, u32, u32), u32>>,
    bin_cache: RefCell<FxMap<(BinOp, u32, u32), u32>>,
    ite_cache: RefCell<FxMap<(u32, u32, u32), u32>>,
    restrict_cache: RefCell<FxMap<(u32, u32, bool), u32>>,
    // Satisfying-assignment counts over the full variable universe, keyed by
    // node index. Nodes are never reclaimed, so entries stay valid.
    count_cache: RefCell<FxMap<u32, BigUint>>,
    count_calls: Cell<u64>,
}

impl BddManager {
    pub fn new(num_vars: u32) -> Self {
        assert!(num_vars < TERM_VAR, "too many variables");
        let nodes = vec![
            Node { var: TERM_VAR, low: FALSE_IDX, high: FALSE_IDX },
            Node { var: TERM_VAR, low: TRUE_IDX, high: TRUE_IDX },
        ];
        BddManager {
            id: NEXT_MANAGER_ID.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
            num_vars,
            nodes: RefCell::new(nodes),
            unique: RefCell::new(FxMap::default()),
            bin_cache: RefCell::new(FxMap::default()),
            ite_cache: RefCell::new(FxMap::default()),
            restrict_cache: RefCell::new(FxMap::default()),
            count_cache: RefCell::new(FxMap::default()),
            count_calls: Cell::new(0),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Total nodes allocated so far (including the two terminals).
    pub fn node_count(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn count_calls(&self) -> u64 {
        self.count_calls.get()
    }

    pub fn false_node(&self) -> NodeRef {
        NodeRef { mgr: self.id, idx: FALSE_IDX }
    }

    pub fn true_node(&self) -> NodeRef {
        NodeRef { mgr: self.id, idx: TRUE_IDX }
    }

    pub fn constant(&self, b: bool) -> NodeRef {
        if b {
            self.true_node()
        } else {
            self.false_node()
        }
    }

    fn check(&self, f: NodeRef) -> u32 {
        assert_eq!(f.mgr, self.id, "node belongs to a different manager");
        f.idx
    }

    fn wrap(&self, idx: u32) -> NodeRef {
        NodeRef { mgr: self.id, idx }
    }

    fn node(&self, idx: u32) -> Node {
        self.nodes.borrow()[idx as usize]
    }

    fn var_of(&self, idx: u32) -> u32 {
        self.nodes.borrow()[idx as usize].var
    }

    /// Hash-consed node constructor; enforces reduction (`low == high`
    /// collapses) and uniqueness.
    fn mk(&self, var: u32, low: u32, high: u32) -> u32 {
        if low == high {
            return low;
        }
        debug_assert!(var < self.var_of(low) && var < self.var_of(high));
        let key = (var, low, high);
        if let Some(&idx) = self.unique.borrow().get(&key) {
            return idx;
        }
        let mut nodes = self.nodes.borrow_mut();
        let idx = nodes.len() as u32;
        nodes.push(Node { var, low, high });
        drop(nodes);
        self.unique.borrow_mut().insert(key, idx);
        idx
    }

    /// The function that is true iff variable `v` is true.
    pub fn variable(&self, v: u32) -> NodeRef {
        assert!(v < self.num_vars, "variable index {v} out of range (n = {})", self.num_vars);
        self.wrap(self.mk(v, FALSE_IDX, TRUE_IDX))
    }

    /// The literal `q_v = b`.
    pub fn literal(&self, v: u32, b: bool) -> NodeRef {
        let x = self.variable(v);
        if b {
            x
        } else {
            self.negate(x)
        }
    }

    /// Conjunction of literals, one per (variable, value) pair.
    pub fn cube(&self, lits: &[(u32, bool)]) -> NodeRef {
        let mut acc = self.true_node();
        for &(v, b) in lits {
            let lit = self.literal(v, b);
            acc = self.and(acc, lit);
        }
        acc
    }

    /// Minterm of a full assignment over variables `base..base+bits.len()`.
    pub fn minterm(&self, base: u32, bits: &[bool]) -> NodeRef {
        let lits: Vec<(u32, bool)> = bits.iter().enumerate().map(|(i, &b)| (base + i as u32, b)).collect();
        self.cube(&lits)
    }

    pub fn apply_binary(&self, op: BinOp, f: NodeRef, g: NodeRef) -> NodeRef {
        let (fi, gi) = (self.check(f), self.check(g));
        self.wrap(self.apply_rec(op, fi, gi))
    }

    pub fn and(&self, f: NodeRef, g: NodeRef) -> NodeRef {
        self.apply_binary(BinOp::And, f, g)
    }

    pub fn or(&self, f: NodeRef, g: NodeRef) -> NodeRef {
        self.apply_binary(BinOp::Or, f, g)
    }

    pub fn xor(&self, f: NodeRef, g: NodeRef) -> NodeRef {
        self.apply_binary(BinOp::Xor, f, g)
    }

    /// Pointwise complement, computed as XOR with TRUE so it shares the
    /// binary-operation cache.
    pub fn negate(&self, f: NodeRef) -> NodeRef {
        let fi = self.check(f);
        self.wrap(self.apply_rec(BinOp::Xor, fi, TRUE_IDX))
    }

    fn apply_rec(&self, op: BinOp, f: u32, g: u32) -> u32 {
        // Terminal rules.
        match op {
            BinOp::And => {
                if f == FALSE_IDX || g == FALSE_IDX {
                    return FALSE_IDX;
                }
                if f == TRUE_IDX {
                    return g;
                }
                if g == TRUE_IDX || f == g {
                    return f;
                }
            }
            BinOp::Or => {
                if f == TRUE_IDX || g == TRUE_IDX {
                    return TRUE_IDX;
                }
                if f == FALSE_IDX {
                    return g;
                }
                if g == FALSE_IDX || f == g {
                    return f;
                }
            }
            BinOp::Xor => {
                if f == g {
                    return FALSE_IDX;
                }
                if f == FALSE_IDX {
                    return g;
                }
                if g == FALSE_IDX {
                    return f;
                }
                if f == TRUE_IDX && g == TRUE_IDX {
                    return FALSE_IDX;
                }
            }
        }
        // Commutative: normalize operand order for cache hits.
        let (f, g) = if f <= g { (f, g) } else { (g, f) };
        if let Some(&r) = self.bin_cache.borrow().get(&(op, f, g)) {
            return r;
        }
        let nf = self.node(f);
        let ng = self.node(g);
        let v = nf.var.min(ng.var);
        let (f0, f1) = if nf.var == v { (nf.low, nf.high) } else { (f, f) };
        let (g0, g1) = if ng.var == v { (ng.low, ng.high) } else { (g, g) };
        let low = self.apply_rec(op, f0, g0);
        let high = self.apply_rec(op, f1, g1);
        let r = self.mk(v, low, high);
        self.bin_cache.borrow_mut().insert((op, f, g), r);
        r
    }

    /// If-then-else: `(f ∧ g) ∨ (¬f ∧ h)`.
    pub fn ite(&self, f: NodeRef, g: NodeRef, h: NodeRef) -> NodeRef {
        let (fi, gi, hi) = (self.check(f), self.check(g), self.check(h));
        self.wrap(self.ite_rec(fi, gi, hi))
    }

    fn ite_rec(&self, f: u32, g: u32, h: u32) -> u32 {
        if f == TRUE_IDX {
            return g;
        }
        if f == FALSE_IDX {
            return h;
        }
        if g == h {
            return g;
        }
        if g == TRUE_IDX && h == FALSE_IDX {
            return f;
        }
        if g == TRUE_IDX || g == f {
            // f ∨ h
            return self.apply_rec(BinOp::Or, f, h);
        }
        if h == FALSE_IDX {
            // f ∧ g
            return self.apply_rec(BinOp::And, f, g);
        }
        if g == FALSE_IDX && h == TRUE_IDX {
            return self.apply_rec(BinOp::Xor, f, TRUE_IDX);
        }
        if let Some(&r) = self.ite_cache.borrow().get(&(f, g, h)) {
            return r;
        }
        let nf = self.node(f);
        let ng = self.node(g);
        let nh = self.node(h);
        let v = nf.var.min(ng.var).min(nh.var);
        let (f0, f1) = if nf.var == v { (nf.low, nf.high) } else { (f, f) };
        let (g0, g1) = if ng.var == v { (ng.low, ng.high) } else { (g, g) };
        let (h0, h1) = if nh.var == v { (nh.low, nh.high) } else { (h, h) };
        let low = self.ite_rec(f0, g0, h0);
        let high = self.ite_rec(f1, g1, h1);
        let r = self.mk(v, low, high);
        self.ite_cache.borrow_mut().insert((f, g, h), r);
        r
    }

    /// Restrict one variable to a constant.
    pub fn restrict(&self, f: NodeRef, v: u32, b: bool) -> NodeRef {
        assert!(v < self.num_vars, "variable index out of range");
        let fi = self.check(f);
        self.wrap(self.restrict_rec(fi, v, b))
    }

    /// Restrict several variables at once; `assignment` maps variable to bit.
    pub fn cofactor(&self, f: NodeRef, assignment: &[(u32, bool)]) -> NodeRef {
        let mut cur = f;
        for &(v, b) in assignment {
            cur = self.restrict(cur, v, b);
        }
        cur
    }

    fn restrict_rec(&self, f: u32, v: u32, b: bool) -> u32 {
        let nf = self.node(f);
        if nf.var > v {
            return f;
        }
        if nf.var == v {
            return if b { nf.high } else { nf.low };
        }
        if let Some(&r) = self.restrict_cache.borrow().get(&(f, v, b)) {
            return r;
        }
        let low = self.restrict_rec(nf.low, v, b);
        let high = self.restrict_rec(nf.high, v, b);
        let r = self.mk(nf.var, low, high);
        self.restrict_cache.borrow_mut().insert((f, v, b), r);
        r
    }

    /// Simultaneous substitution: every entry of `map` is read against the
    /// pre-substitution variables. Variables not in the map stay themselves.
    pub fn substitute(&self, f: NodeRef, map: &[(u32, NodeRef)]) -> NodeRef {
        let fi = self.check(f);
        let mut table: Vec<Option<u32>> = vec![None; self.num_vars as usize];
        for &(v, g) in map {
            assert!(v < self.num_vars, "variable index out of range");
            table[v as usize] = Some(self.check(g));
        }
        let mut memo: FxMap<u32, u32> = FxMap::default();
        self.wrap(self.subst_rec(fi, &table, &mut memo))
    }

    fn subst_rec(&self, f: u32, table: &[Option<u32>], memo: &mut FxMap<u32, u32>) -> u32 {
        if f <= TRUE_IDX {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let nf = self.node(f);
        let low = self.subst_rec(nf.low, table, memo);
        let high = self.subst_rec(nf.high, table, memo);
        let r = match table[nf.var as usize] {
            Some(g) => self.ite_rec(g, high, low),
            None => self.ite_rec(self.mk(nf.var, FALSE_IDX, TRUE_IDX), high, low),
        };
        memo.insert(f, r);
        r
    }

    /// Evaluate `f` under a full assignment (index = variable).
    pub fn eval(&self, f: NodeRef, assignment: &[bool]) -> bool {
        let mut idx = self.check(f);
        loop {
            let n = self.node(idx);
            if n.var == TERM_VAR {
                return idx == TRUE_IDX;
            }
            idx = if assignment[n.var as usize] { n.high } else { n.low };
        }
    }

    /// Number of satisfying assignments of `f` over exactly the first
    /// `universe` variables. Requires `support(f) ⊆ {q0..q_{universe−1}}`.
    pub fn sat_count(&self, f: NodeRef, universe: u32) -> BigUint {
        assert!(universe <= self.num_vars, "universe exceeds manager variables");
        if let Some(top) = self.support_max(f) {
            assert!(top < universe, "support exceeds counting universe");
        }
        self.sat_count_unchecked(f, universe)
    }

    /// Same as [`sat_count`](Self::sat_count) without the support check; used
    /// on slices whose support is guaranteed by construction.
    pub fn sat_count_unchecked(&self, f: NodeRef, universe: u32) -> BigUint {
        self.count_calls.set(self.count_calls.get() + 1);
        let fi = self.check(f);
        let below = self.count_below(fi);
        // count_below covers variables var(f)..num_vars; scale by the free
        // variables above the root, then drop the free tail beyond `universe`.
        let var = self.var_of(fi).min(self.num_vars);
        let full = below << var;
        full >> (self.num_vars - universe)
    }

    fn count_below(&self, f: u32) -> BigUint {
        if f == FALSE_IDX {
            return BigUint::zero();
        }
        if f == TRUE_IDX {
            return BigUint::one();
        }
        if let Some(c) = self.count_cache.borrow().get(&f) {
            return c.clone();
        }
        let n = self.node(f);
        let lv = self.var_of(n.low).min(self.num_vars);
        let hv = self.var_of(n.high).min(self.num_vars);
        let low = self.count_below(n.low) << (lv - n.var - 1);
        let high = self.count_below(n.high) << (hv - n.var - 1);
        let total = low + high;
        self.count_cache.borrow_mut().insert(f, total.clone());
        total
    }

    /// Largest variable in the support of `f`, if any.
    pub fn support_max(&self, f: NodeRef) -> Option<u32> {
        let fi = self.check(f);
        let mut seen: FxMap<u32, ()> = FxMap::default();
        let mut max: Option<u32> = None;
        let mut stack = vec![fi];
        while let Some(i) = stack.pop() {
            if i <= TRUE_IDX || seen.contains_key(&i) {
                continue;
            }
            seen.insert(i, ());
            let n = self.node(i);
            max = Some(max.map_or(n.var, |m| m.max(n.var)));
            stack.push(n.low);
            stack.push(n.high);
        }
        max
    }

    /// Smallest variable in the support of `f`, if any (the root variable).
    pub fn support_min(&self, f: NodeRef) -> Option<u32> {
        let fi = self.check(f);
        let v = self.var_of(fi);
        (v != TERM_VAR).then_some(v)
    }

    /// Number of distinct nodes reachable from `f` (terminals excluded).
    pub fn dag_size(&self, f: NodeRef) -> usize {
        let fi = self.check(f);
        let mut seen: FxMap<u32, ()> = FxMap::default();
        let mut stack = vec![fi];
        let mut count = 0;
        while let Some(i) = stack.pop() {
            if i <= TRUE_IDX || seen.contains_key(&i) {
                continue;
            }
            seen.insert(i, ());
            count += 1;
            let n = self.node(i);
            stack.push(n.low);
            stack.push(n.high);
        }
        count
    }

    /// Visit every satisfying assignment of `f` restricted to the variable
    /// window `[base, base+width)`. `support(f)` must lie inside the window.
    /// The callback receives the window bits in variable order.
    pub fn foreach_sat(&self, f: NodeRef, base: u32, width: u32, visit: &mut dyn FnMut(&[bool])) {
        let fi = self.check(f);
        if let Some(top) = self.support_max(f) {
            assert!(top >= base && top < base + width, "support outside window");
        }
        if let Some(bot) = self.support_min(f) {
            assert!(bot >= base, "support outside window");
        }
        let mut bits = vec![false; width as usize];
        self.foreach_sat_rec(fi, base, base + width, base, &mut bits, visit);
    }

    fn foreach_sat_rec(
        &self,
        f: u32,
        base: u32,
        end: u32,
        pos: u32,
        bits: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[bool]),
    ) {
        if f == FALSE_IDX {
            return;
        }
        let var = self.var_of(f).min(end);
        if pos < var {
            // Free variable: expand both values.
            bits[(pos - base) as usize] = false;
            self.foreach_sat_rec(f, base, end, pos + 1, bits, visit);
            bits[(pos - base) as usize] = true;
            self.foreach_sat_rec(f, base, end, pos + 1, bits, visit);
            return;
        }
        if f == TRUE_IDX {
            visit(bits);
            return;
        }
        let n = self.node(f);
        bits[(pos - base) as usize] = false;
        self.foreach_sat_rec(n.low, base, end, pos + 1, bits, visit);
        bits[(pos - base) as usize] = true;
        self.foreach_sat_rec(n.high, base, end, pos + 1, bits, visit);
    }

    /// DOT rendering of the graph under `f`, for debugging.
    pub fn to_dot(&self, f: NodeRef, name: &str) -> String {
        let fi = self.check(f);
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  n{FALSE_IDX} [shape=box,label=\"0\"];");
        let _ = writeln!(out, "  n{TRUE_IDX} [shape=box,label=\"1\"];");
        let mut seen: FxMap<u32, ()> = FxMap::default();
        let mut stack = vec![fi];
        while let Some(i) = stack.pop() {
            if i <= TRUE_IDX || seen.contains_key(&i) {
                continue;
            }
            seen.insert(i, ());
            let n = self.node(i);
            let _ = writeln!(out, "  n{i} [label=\"q{}\"];", n.var);
            let _ = writeln!(out, "  n{i} -> n{} [style=dashed];", n.low);
            let _ = writeln!(out, "  n{i} -> n{};", n.high);
            stack.push(n.low);
            stack.push(n.high);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::{RngCore, SeedableRng};

    fn all_assignments(n: u32) -> Vec<Vec<bool>> {
        (0..1u64 << n)
            .map(|i| (0..n).map(|v| (i >> (n - 1 - v)) & 1 == 1).collect())
            .collect()
    }

    /// Random function over `n` variables, built from random combinators.
    fn random_fn(m: &BddManager, n: u32, rng: &mut rand_chacha::ChaCha8Rng, depth: u32) -> NodeRef {
        if depth == 0 {
            let v = rng.next_u32() % n;
            let f = m.variable(v);
            return if rng.next_u32().is_multiple_of(2) { f } else { m.negate(f) };
        }
        let f = random_fn(m, n, rng, depth - 1);
        let g = random_fn(m, n, rng, depth - 1);
        match rng.next_u32() % 3 {
            0 => m.and(f, g),
            1 => m.or(f, g),
            _ => m.xor(f, g),
        }
    }

    #[test]
    fn variable_semantics() {
        let m = BddManager::new(2);
        let q0 = m.variable(0);
        assert!(m.eval(q0, &[true, false]));
        assert!(!m.eval(q0, &[false, true]));
        assert_ne!(q0, m.variable(1));
        // canonicity: same variable twice is the same reference
        assert_eq!(q0, m.variable(0));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn variable_out_of_range() {
        let m = BddManager::new(2);
        let _ = m.variable(2);
    }

    #[test]
    #[should_panic(expected = "different manager")]
    fn mixed_managers_rejected() {
        let m1 = BddManager::new(2);
        let m2 = BddManager::new(2);
        let _ = m1.and(m1.variable(0), m2.variable(0));
    }

    #[test]
    fn apply_basics() {
        let m = BddManager::new(2);
        let q0 = m.variable(0);
        let q1 = m.variable(1);
        assert!(m.and(q0, m.negate(q0)).is_false());
        let f = m.and(q0, q1);
        assert_eq!(m.xor(f, m.false_node()), f);
        // OR(q0∧q1, ¬q0∧¬q1) is true exactly on {11, 00}
        let g = m.or(f, m.and(m.negate(q0), m.negate(q1)));
        for bits in all_assignments(2) {
            assert_eq!(m.eval(g, &bits), bits[0] == bits[1]);
        }
    }

    #[test]
    fn apply_matches_truth_tables() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let m = BddManager::new(4);
        for _ in 0..50 {
            let f = random_fn(&m, 4, &mut rng, 3);
            let g = random_fn(&m, 4, &mut rng, 3);
            let and = m.and(f, g);
            let or = m.or(f, g);
            let xor = m.xor(f, g);
            for bits in all_assignments(4) {
                let (bf, bg) = (m.eval(f, &bits), m.eval(g, &bits));
                assert_eq!(m.eval(and, &bits), bf & bg);
                assert_eq!(m.eval(or, &bits), bf | bg);
                assert_eq!(m.eval(xor, &bits), bf ^ bg);
            }
        }
    }

    #[test]
    fn negate_involution() {
        let m = BddManager::new(3);
        assert!(m.negate(m.true_node()).is_false());
        let q0 = m.variable(0);
        assert!(m.eval(m.negate(q0), &[false, false, false]));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = random_fn(&m, 3, &mut rng, 3);
            // involution and canonicity: same reference back
            assert_eq!(m.negate(m.negate(f)), f);
        }
    }

    #[test]
    fn cofactor_examples() {
        let m = BddManager::new(2);
        let q0 = m.variable(0);
        let q1 = m.variable(1);
        let f = m.and(q0, q1);
        assert_eq!(m.cofactor(f, &[(0, true)]), q1);
        // (q0∧q1 ∨ ¬q0∧¬q1) restricted at q0=1 is q1
        let g = m.or(f, m.and(m.negate(q0), m.negate(q1)));
        assert_eq!(m.cofactor(g, &[(0, true)]), q1);
        assert_eq!(m.cofactor(g, &[]), g);
    }

    #[test]
    fn substitute_examples() {
        let m = BddManager::new(2);
        let q0 = m.variable(0);
        let q1 = m.variable(1);
        // X-gate index map: (¬q0 ∧ ¬q1)[q0 ← ¬q0] = q0 ∧ ¬q1
        let f = m.and(m.negate(q0), m.negate(q1));
        let fx = m.substitute(f, &[(0, m.negate(q0))]);
        assert_eq!(fx, m.and(q0, m.negate(q1)));
        // q1[q1 ← q1⊕q0] = q0⊕q1, checked on all 4 assignments
        let g = m.substitute(q1, &[(1, m.xor(q1, q0))]);
        for bits in all_assignments(2) {
            assert_eq!(m.eval(g, &bits), bits[0] ^ bits[1]);
        }
        // swap twice is the identity
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let h = random_fn(&m, 2, &mut rng, 3);
        let swap = [(0u32, q1), (1u32, q0)];
        let once = m.substitute(h, &swap);
        assert_eq!(m.substitute(once, &swap), h);
    }

    #[test]
    fn substitute_agrees_with_rewrite() {
        // simultaneous substitution equals evaluate-after-rewrite on all
        // assignments, n ≤ 4
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let m = BddManager::new(4);
        for _ in 0..30 {
            let f = random_fn(&m, 4, &mut rng, 3);
            let mut subs: Vec<(u32, NodeRef)> = Vec::new();
            for v in 0..4 {
                if rng.next_u32() % 2 == 0 {
                    let s = random_fn(&m, 4, &mut rng, 2);
                    subs.push((v, s));
                }
            }
            let g = m.substitute(f, &subs);
            for bits in all_assignments(4) {
                let mut rewritten = bits.clone();
                for &(v, s) in &subs {
                    rewritten[v as usize] = m.eval(s, &bits);
                }
                assert_eq!(m.eval(g, &bits), m.eval(f, &rewritten));
            }
        }
    }

    #[test]
    fn sat_count_basics() {
        let m = BddManager::new(3);
        assert_eq!(m.sat_count(m.true_node(), 3), BigUint::from(8u32));
        let f = m.and(m.variable(0), m.variable(1));
        assert_eq!(m.sat_count(f, 3), BigUint::from(2u32));
        assert_eq!(m.sat_count(f, 2), BigUint::from(1u32));
        assert_eq!(m.sat_count(m.false_node(), 3), BigUint::zero());
    }

    #[test]
    #[should_panic(expected = "support exceeds")]
    fn sat_count_support_check() {
        let m = BddManager::new(3);
        let f = m.variable(2);
        let _ = m.sat_count(f, 2);
    }

    #[test]
    fn sat_count_matches_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let m = BddManager::new(12);
        for _ in 0..10 {
            let f = random_fn(&m, 12, &mut rng, 5);
            let brute = all_assignments(12)
                .iter()
                .filter(|bits| m.eval(f, bits))
                .count();
            assert_eq!(m.sat_count(f, 12), BigUint::from(brute));
            // complement counts fill the space
            let total = m.sat_count(f, 12) + m.sat_count(m.negate(f), 12);
            assert_eq!(total, BigUint::from(1u32) << 12);
        }
    }

    #[test]
    fn ite_consistency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let m = BddManager::new(4);
        for _ in 0..40 {
            let f = random_fn(&m, 4, &mut rng, 3);
            let g = random_fn(&m, 4, &mut rng, 3);
            let h = random_fn(&m, 4, &mut rng, 3);
            let ite = m.ite(f, g, h);
            let expanded = m.or(m.and(f, g), m.and(m.negate(f), h));
            // canonicity: semantically equal results are reference-equal
            assert_eq!(ite, expanded);
        }
    }

    #[test]
    fn foreach_sat_window() {
        let m = BddManager::new(4);
        // function over the window [1, 4): q1 ∧ ¬q3
        let f = m.and(m.variable(1), m.negate(m.variable(3)));
        let mut seen = Vec::new();
        m.foreach_sat(f, 1, 3, &mut |bits| seen.push(bits.to_vec()));
        seen.sort();
        assert_eq!(
            seen,
            vec![vec![true, false, false], vec![true, true, false]]
        );
    }

    #[test]
    fn dot_export_contains_nodes() {
        let m = BddManager::new(2);
        let f = m.and(m.variable(0), m.variable(1));
        let dot = m.to_dot(f, "f");
        assert!(dot.contains("q0"));
        assert!(dot.contains("q1"));
        assert!(dot.starts_with("digraph"));
    }
}
