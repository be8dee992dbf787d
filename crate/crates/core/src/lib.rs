//! Symbolic simulation of quantum programs with classical control flow.
//!
//! This crate simulates Clifford+T circuits with `if`/`switch`/`for`/`while`
//! control, interpreting `while`-loops as sequential quantum circuits with an
//! explicit split between iteration-scoped (external) and feedback (internal)
//! qubits. Quantum states are encoded as bit-sliced Boolean functions over
//! binary decision diagrams: all 2^n amplitudes live in ℤ\[ω\] (ω = e^{iπ/4})
//! with a shared scale 1/√2^k, and the integer components of every amplitude
//! are stored as two's-complement bit planes, each a BDD over the index
//! variables. Measurement probabilities are exact values in ℚ(√2), computed
//! by weighted model counting on the slice BDDs.
//!
//! Module map:
//! - [`bdd`]: reduced ordered BDDs with hash consing, substitution, and
//!   arbitrary-precision model counting.
//! - [`scalar`]: exact arithmetic in ℤ\[ω\] and ℚ(√2).
//! - [`kernel`]: the bit-sliced symbolic state, Boolean gate-update rules,
//!   measurement collapse, probability evaluation, and the composition /
//!   retention operators for sequential circuits.
//! - [`qasm`]: lexer, parser, and static analyzer for the supported
//!   OpenQASM 3 fragment, producing a hierarchical block tree.
//! - [`exec`]: block-tree execution with sample/preset measurement modes,
//!   path-probability accumulation, and reachability queries.
//! - [`dense`]: a deliberately naive dense reference simulator used as the
//!   brute-force oracle in tests.
//! - [`bench`](mod@bench): generators for the benchmark circuit families.

pub mod bdd;
pub mod bench;
pub mod dense;
pub mod exec;
pub mod kernel;
pub mod qasm;
pub mod scalar;
