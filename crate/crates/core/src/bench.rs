//! Benchmark circuit families, emitted as OpenQASM text and as
//! ready-to-drive sequential-circuit frames.
//!
//! Families:
//! - `rus_x`: the two-qubit repeat-until-success realization of an X gate —
//!   the loop body puts the ancilla through H·CX and retries until the
//!   ancilla measurement signals success.
//! - `qrw`: a discrete quantum walk — per iteration a Hadamard coin flip, a
//!   coin-directed ±1 shift on an ℓ-qubit position register, and a
//!   multi-controlled X that raises an external flag exactly on the all-ones
//!   internal configuration; the flag measurement drives the loop guard.
//! - `grover`: search iterations (oracle phase flip on one marked basis
//!   state, then the diffusion operator) with the same flag-raising pattern.
//! - `random_while`: seeded random Clifford+T programs with one while loop,
//!   mid-circuit measurements feeding branches, and a dedicated guard qubit
//!   that gets a Hadamard each round so the loop terminates with probability
//!   1/2 per iteration.

use crate::exec::SqcSpec;
use crate::kernel::{index_to_bits, GateKind, GateOp, RegisterPartition};
use crate::qasm::{BitSource, Block, Condition, Op};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde_json::json;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum BenchSpec {
    RusX { success_on_one: bool },
    Qrw { position_qubits: u32 },
    Grover { data_qubits: u32, marked: u64 },
    RandomWhile { qubits: u32, gates: u32, mid_measures: u32, seed: u64 },
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            BenchSpec::RusX { .. } => Ok(()),
            BenchSpec::Qrw { position_qubits } => {
                if *position_qubits < 2 {
                    Err("the walk needs at least 2 position qubits".into())
                } else {
                    Ok(())
                }
            }
            BenchSpec::Grover { data_qubits, marked } => {
                if *data_qubits < 2 {
                    Err("search needs at least 2 data qubits".into())
                } else if *data_qubits < 64 && *marked >= (1u64 << data_qubits) {
                    Err(format!("marked index {marked} out of range for {data_qubits} qubits"))
                } else {
                    Ok(())
                }
            }
            BenchSpec::RandomWhile { qubits, gates, .. } => {
                if *qubits < 2 || *gates < 1 {
                    Err("random programs need at least 2 qubits and 1 gate".into())
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn generate(&self) -> String {
        self.validate().expect("invalid benchmark parameters");
        match self {
            BenchSpec::RusX { success_on_one } => gen_rus_x(*success_on_one),
            BenchSpec::Qrw { position_qubits } => gen_qrw(*position_qubits),
            BenchSpec::Grover { data_qubits, marked } => gen_grover(*data_qubits, *marked),
            BenchSpec::RandomWhile { qubits, gates, mid_measures, seed } => {
                gen_random_while(*qubits, *gates, *mid_measures, *seed)
            }
        }
    }

    /// Parameter manifest describing one generated benchmark.
    pub fn manifest(&self) -> serde_json::Value {
        match self {
            BenchSpec::RusX { success_on_one } => json!({
                "family": "rus_x",
                "qubits": 2,
                "bits": 1,
                "success_on_one": success_on_one,
            }),
            BenchSpec::Qrw { position_qubits } => json!({
                "family": "qrw",
                "position_qubits": position_qubits,
                "qubits": position_qubits + 2,
                "bits": 1,
            }),
            BenchSpec::Grover { data_qubits, marked } => json!({
                "family": "grover",
                "data_qubits": data_qubits,
                "marked": marked,
                "qubits": data_qubits + 1,
                "bits": 1,
            }),
            BenchSpec::RandomWhile { qubits, gates, mid_measures, seed } => json!({
                "family": "random_while",
                "qubits": qubits,
                "gates": gates,
                "mid_measures": mid_measures,
                "seed": seed,
                "bits": mid_measures + 1,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// repeat-until-success X
// ---------------------------------------------------------------------------

/// The canonical two-qubit retry loop. With `success_on_one` the guard
/// continues on 0 (`while (c == 0)`); with success on 0 the body runs once
/// and then repeats `while (c == 1)`, because a check-first loop over
/// zero-initialized bits would otherwise never enter.
pub fn gen_rus_x(success_on_one: bool) -> String {
    let body = "  h q[0];\n  cx q[0], q[1];\n  c = measure q[0];\n  reset q[0];\n";
    let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nbit c;\n");
    if success_on_one {
        out.push_str("while (c == 0) {\n");
        out.push_str(body);
        out.push_str("}\n");
    } else {
        out.push_str(&body.replace("  ", ""));
        out.push_str("while (c == 1) {\n");
        out.push_str(body);
        out.push_str("}\n");
    }
    out
}

/// The same loop as a sequential frame: ancilla `q0` external, target `q1`
/// internal.
pub fn rus_x_sqc_spec() -> SqcSpec {
    SqcSpec {
        partition: RegisterPartition::new(1, 1),
        num_bits: 1,
        body: vec![Block::Cqc(vec![Op::Gate(GateOp::h(0)), Op::Gate(GateOp::cx(0, 1))])],
        ext_prep: vec![],
        external_bits: vec![0],
        guard: Condition { source: BitSource::Single(0), equal: true, value: 0 },
    }
}

// ---------------------------------------------------------------------------
// quantum walk
// ---------------------------------------------------------------------------

/// Frame layout: `q0` flag (external), `q1` coin, `q2..q_{2+l}` position with
/// `q2` the least significant bit.
pub fn qrw_body_ops(l: u32) -> Vec<GateOp> {
    let coin = 1u32;
    let pos = |j: u32| 2 + j;
    let mut ops = Vec::new();
    ops.push(GateOp::h(coin));
    // +1 shift when the coin is 0: X-sandwich the coin around an increment
    // ladder (bit j flips when all lower bits are 1), applied top bit first
    ops.push(GateOp::x(coin));
    for j in (0..l).rev() {
        let mut controls = vec![coin];
        controls.extend((0..j).map(pos));
        ops.push(mcx_of(controls, pos(j)));
    }
    ops.push(GateOp::x(coin));
    // −1 shift when the coin is 1: conjugate the increment by bitwise NOT
    for j in 0..l {
        ops.push(GateOp::x(pos(j)));
    }
    for j in (0..l).rev() {
        let mut controls = vec![coin];
        controls.extend((0..j).map(pos));
        ops.push(mcx_of(controls, pos(j)));
    }
    for j in 0..l {
        ops.push(GateOp::x(pos(j)));
    }
    // raise the flag on the all-ones internal configuration (coin + position)
    let mut controls = vec![coin];
    controls.extend((0..l).map(pos));
    ops.push(GateOp::mcx(controls, 0));
    ops
}

fn mcx_of(controls: Vec<u32>, target: u32) -> GateOp {
    match controls.len() {
        1 => GateOp::cx(controls[0], target),
        2 => GateOp::ccx(controls[0], controls[1], target),
        _ => GateOp::mcx(controls, target),
    }
}

pub fn qrw_sqc_spec(l: u32) -> SqcSpec {
    SqcSpec {
        partition: RegisterPartition::new(1, 1 + l),
        num_bits: 1,
        body: vec![Block::Cqc(qrw_body_ops(l).into_iter().map(Op::Gate).collect())],
        ext_prep: vec![],
        external_bits: vec![0],
        guard: Condition { source: BitSource::Single(0), equal: true, value: 0 },
    }
}

pub fn gen_qrw(l: u32) -> String {
    let n = l + 2;
    let mut out = String::new();
    let _ = writeln!(out, "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[{n}] q;\nbit c;");
    out.push_str("while (c == 0) {\n");
    for g in qrw_body_ops(l) {
        let _ = writeln!(out, "  {}", gate_qasm(&g, "q"));
    }
    out.push_str("  c = measure q[0];\n}\n");
    out
}

/// Exact probability that the walk's flag first fires at iteration `k`
/// (guard outcomes `0^{k−1}·1`), via the sequential engine.
pub fn qrw_reach_probability(l: u32, k: u32) -> crate::scalar::RootTwoRational {
    use crate::exec::{run_sqc, RunConfig};
    use crate::kernel::SymbolicState;
    let mgr = std::rc::Rc::new(crate::bdd::BddManager::new(l + 2));
    let internal0 = SymbolicState::basis(mgr, 1, &vec![false; (l + 1) as usize]);
    let mut pattern = vec![false; k as usize - 1];
    pattern.push(true);
    let res = run_sqc(internal0, &qrw_sqc_spec(l), &RunConfig::preset(&pattern), None)
        .expect("walk drive cannot fail");
    res.p_global
}

// ---------------------------------------------------------------------------
// Grover search
// ---------------------------------------------------------------------------

/// Frame layout: `q0` flag (external), `q1..q_{nd}` data (internal), with
/// `q1` carrying the most significant bit of the marked index.
pub fn grover_body_ops(nd: u32, marked: u64) -> Vec<GateOp> {
    let data: Vec<u32> = (1..=nd).collect();
    let marked_bits = index_to_bits(marked, nd);
    let sandwich: Vec<u32> = data
        .iter()
        .zip(&marked_bits)
        .filter(|(_, &b)| !b)
        .map(|(&q, _)| q)
        .collect();
    let mut ops = Vec::new();
    // oracle: phase flip exactly on the marked basis state
    for &q in &sandwich {
        ops.push(GateOp::x(q));
    }
    ops.push(GateOp::mcz(data.clone()));
    for &q in &sandwich {
        ops.push(GateOp::x(q));
    }
    // diffusion: H^⊗, X^⊗, all-ones phase flip, X^⊗, H^⊗
    for &q in &data {
        ops.push(GateOp::h(q));
    }
    for &q in &data {
        ops.push(GateOp::x(q));
    }
    ops.push(GateOp::mcz(data.clone()));
    for &q in &data {
        ops.push(GateOp::x(q));
    }
    for &q in &data {
        ops.push(GateOp::h(q));
    }
    // raise the flag when the data register sits on the marked state
    for &q in &sandwich {
        ops.push(GateOp::x(q));
    }
    ops.push(GateOp::mcx(data, 0));
    for &q in &sandwich {
        ops.push(GateOp::x(q));
    }
    ops
}

pub fn grover_sqc_spec(nd: u32, marked: u64) -> SqcSpec {
    SqcSpec {
        partition: RegisterPartition::new(1, nd),
        num_bits: 1,
        body: vec![Block::Cqc(grover_body_ops(nd, marked).into_iter().map(Op::Gate).collect())],
        ext_prep: vec![],
        external_bits: vec![0],
        guard: Condition { source: BitSource::Single(0), equal: true, value: 0 },
    }
}

pub fn gen_grover(nd: u32, marked: u64) -> String {
    let n = nd + 1;
    let mut out = String::new();
    let _ = writeln!(out, "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[{n}] q;\nbit c;");
    for q in 1..=nd {
        let _ = writeln!(out, "h q[{q}];");
    }
    out.push_str("while (c == 0) {\n");
    for g in grover_body_ops(nd, marked) {
        let _ = writeln!(out, "  {}", gate_qasm(&g, "q"));
    }
    out.push_str("  c = measure q[0];\n}\n");
    out
}

// ---------------------------------------------------------------------------
// random while-loop programs
// ---------------------------------------------------------------------------

/// Seeded random program: `gates` Clifford+T gates split around and inside
/// one while loop, `mid_measures` measurements feeding `if` branches, and a
/// guard qubit (the last one) that is freshly |0⟩, Hadamard'ed, and measured
/// every iteration so each round terminates with probability exactly 1/2.
pub fn gen_random_while(qubits: u32, gates: u32, mid_measures: u32, seed: u64) -> String {
    assert!(qubits >= 2 && gates >= 1, "need at least 2 qubits and 1 gate");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guard_qubit = qubits - 1;
    let work_qubits = qubits - 1;
    let num_bits = mid_measures + 1;
    let guard_bit = mid_measures;
    let mut out = String::new();
    let _ = writeln!(out, "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[{qubits}] q;\nbit[{num_bits}] c;");
    let pre = gates / 3;
    for _ in 0..pre {
        let g = random_gate(work_qubits, &mut rng);
        let _ = writeln!(out, "{}", gate_qasm(&g, "q"));
    }
    let _ = writeln!(out, "while (c[{guard_bit}] == 0) {{");
    let inside = gates - pre;
    // spread the mid-measures through the body
    let mut measure_slots: Vec<u32> = (0..mid_measures)
        .map(|_| if inside > 0 { rng.next_u32() % inside } else { 0 })
        .collect();
    measure_slots.sort_unstable();
    let mut slot = 0usize;
    for i in 0..inside {
        while slot < measure_slots.len() && measure_slots[slot] == i {
            let target = rng.next_u32() % work_qubits;
            let _ = writeln!(out, "  c[{slot}] = measure q[{target}];");
            let branch_gate = random_gate(work_qubits, &mut rng);
            let _ = writeln!(out, "  if (c[{slot}] == 1) {{ {} }}", gate_qasm(&branch_gate, "q"));
            slot += 1;
        }
        let g = random_gate(work_qubits, &mut rng);
        let _ = writeln!(out, "  {}", gate_qasm(&g, "q"));
    }
    while slot < measure_slots.len() {
        let target = rng.next_u32() % work_qubits;
        let _ = writeln!(out, "  c[{slot}] = measure q[{target}];");
        let branch_gate = random_gate(work_qubits, &mut rng);
        let _ = writeln!(out, "  if (c[{slot}] == 1) {{ {} }}", gate_qasm(&branch_gate, "q"));
        slot += 1;
    }
    let _ = writeln!(out, "  h q[{guard_qubit}];");
    let _ = writeln!(out, "  c[{guard_bit}] = measure q[{guard_qubit}];");
    let _ = writeln!(out, "  reset q[{guard_qubit}];");
    out.push_str("}\n");
    out
}

/// Uniformly sampled gate over `n` qubits from the supported set.
pub fn random_gate(n: u32, rng: &mut ChaCha8Rng) -> GateOp {
    let t = rng.next_u32() % n;
    if n == 1 {
        return match rng.next_u32() % 8 {
            0 => GateOp::x(t),
            1 => GateOp::y(t),
            2 => GateOp::z(t),
            3 => GateOp::h(t),
            4 => GateOp::s(t),
            5 => GateOp::sdg(t),
            6 => GateOp::t(t),
            _ => GateOp::tdg(t),
        };
    }
    let other = (t + 1 + rng.next_u32() % (n - 1)) % n;
    match rng.next_u32() % 13 {
        0 => GateOp::x(t),
        1 => GateOp::y(t),
        2 => GateOp::z(t),
        3 => GateOp::h(t),
        4 => GateOp::s(t),
        5 => GateOp::sdg(t),
        6 => GateOp::t(t),
        7 => GateOp::tdg(t),
        8 => GateOp::cx(other, t),
        9 => GateOp::cz(other, t),
        10 => GateOp::swap(other, t),
        11 if n >= 3 => {
            let third = pick_distinct(n, &[t, other], rng);
            GateOp::ccx(other, third, t)
        }
        12 if n >= 3 => {
            let third = pick_distinct(n, &[t, other], rng);
            GateOp::mcz(vec![t, other, third])
        }
        _ => GateOp::h(t),
    }
}

fn pick_distinct(n: u32, used: &[u32], rng: &mut ChaCha8Rng) -> u32 {
    loop {
        let q = rng.next_u32() % n;
        if !used.contains(&q) {
            return q;
        }
    }
}

/// Random gate sequence; the shared sampler behind the random-circuit test
/// corpora.
pub fn random_gate_ops(n: u32, count: usize, rng: &mut ChaCha8Rng) -> Vec<GateOp> {
    (0..count).map(|_| random_gate(n, rng)).collect()
}

/// Render one gate as program text over the register `reg`.
pub fn gate_qasm(g: &GateOp, reg: &str) -> String {
    let op = |q: &u32| format!("{reg}[{q}]");
    let list = |qs: &[u32]| qs.iter().map(op).collect::<Vec<_>>().join(", ");
    match g.kind {
        GateKind::X => format!("x {};", op(&g.targets[0])),
        GateKind::Y => format!("y {};", op(&g.targets[0])),
        GateKind::Z => format!("z {};", op(&g.targets[0])),
        GateKind::H => format!("h {};", op(&g.targets[0])),
        GateKind::S => format!("s {};", op(&g.targets[0])),
        GateKind::Sdg => format!("sdg {};", op(&g.targets[0])),
        GateKind::T => format!("t {};", op(&g.targets[0])),
        GateKind::Tdg => format!("tdg {};", op(&g.targets[0])),
        GateKind::Cx => format!("cx {}, {};", op(&g.controls[0]), op(&g.targets[0])),
        GateKind::Cz => format!("cz {};", list(&g.targets)),
        GateKind::Swap => format!("swap {};", list(&g.targets)),
        GateKind::Ccx => format!("ccx {}, {}, {};", op(&g.controls[0]), op(&g.controls[1]), op(&g.targets[0])),
        GateKind::Mcx => {
            let ctrl = "ctrl @ ".repeat(g.controls.len());
            format!("{ctrl}x {}, {};", list(&g.controls), op(&g.targets[0]))
        }
        GateKind::Mcz => {
            let ctrl = "ctrl @ ".repeat(g.targets.len() - 1);
            format!("{ctrl}z {};", list(&g.targets))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseState;
    use crate::exec::{run, run_sqc, RunConfig, RunStatus};
    use crate::qasm::parse_and_analyze;
    use crate::scalar::RootTwoRational;

    fn rt(n: i64, d: i64) -> RootTwoRational {
        RootTwoRational::from_ratio(n, d)
    }

    #[test]
    fn all_families_generate_clean_programs() {
        let specs = [
            BenchSpec::RusX { success_on_one: true },
            BenchSpec::RusX { success_on_one: false },
            BenchSpec::Qrw { position_qubits: 4 },
            BenchSpec::Grover { data_qubits: 3, marked: 5 },
            BenchSpec::RandomWhile { qubits: 6, gates: 20, mid_measures: 3, seed: 11 },
        ];
        for spec in specs {
            let text = spec.generate();
            let ir = parse_and_analyze(&text).unwrap_or_else(|e| panic!("{spec:?}: {e:?}\n{text}"));
            assert!(ir.diagnostics.is_empty());
            let manifest = spec.manifest();
            assert!(manifest["family"].is_string());
        }
    }

    #[test]
    fn same_seed_is_byte_identical() {
        let a = gen_random_while(10, 25, 4, 7);
        let b = gen_random_while(10, 25, 4, 7);
        assert_eq!(a, b);
        let c = gen_random_while(10, 25, 4, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn rus_x_analysis_shape_and_law() {
        let ir = parse_and_analyze(&gen_rus_x(true)).unwrap();
        // one loop whose body is a gate/measure run plus the lowered reset
        assert_eq!(ir.blocks.len(), 1);
        for k in 1..=8u32 {
            let mut pattern = vec![false; k as usize - 1];
            pattern.push(true);
            let res = run(&ir, &RunConfig::preset(&pattern)).unwrap();
            assert_eq!(res.p_global, rt(1, 1 << k), "k = {k}");
        }
    }

    #[test]
    fn rus_x_success_on_zero_variant() {
        let ir = parse_and_analyze(&gen_rus_x(false)).unwrap();
        // terminate on the first 0: pattern 1^k·0 runs k+1 iterations
        for k in 0..=4u32 {
            let mut pattern = vec![true; k as usize];
            pattern.push(false);
            let res = run(&ir, &RunConfig::preset(&pattern)).unwrap();
            assert_eq!(res.status, RunStatus::Ok);
            assert_eq!(res.p_global, rt(1, 1 << (k + 1)), "k = {k}");
        }
    }

    #[test]
    fn qrw_first_probabilities() {
        // the flag fires with probability 1/2 at the first step and never at
        // the second (parity), independent of the register size
        for l in [2u32, 3, 4] {
            assert_eq!(qrw_reach_probability(l, 1), rt(1, 2), "l = {l}");
            assert!(qrw_reach_probability(l, 2).is_zero(), "l = {l}");
        }
        assert_eq!(qrw_reach_probability(4, 3), rt(1, 8));
    }

    #[test]
    fn qrw_matches_dense_oracle() {
        // drive the same body over the dense reference with the flag
        // collapsed per iteration
        let l = 3u32;
        let n = l + 2;
        let body = qrw_body_ops(l);
        for k in 1..=6u32 {
            let mut den = DenseState::basis(n, &vec![false; n as usize]);
            for j in 1..=k {
                den.apply_all(&body);
                den.measure(0, j == k);
            }
            let dense_p = den.norm_sq();
            assert_eq!(qrw_reach_probability(l, k), dense_p, "k = {k}");
        }
    }

    #[test]
    fn qrw_program_matches_direct_drive() {
        let l = 3u32;
        let ir = parse_and_analyze(&gen_qrw(l)).unwrap();
        for k in 1..=5u32 {
            let mut pattern = vec![false; k as usize - 1];
            pattern.push(true);
            let res = run(&ir, &RunConfig::preset(&pattern)).unwrap();
            assert_eq!(res.p_global, qrw_reach_probability(l, k), "k = {k}");
        }
    }

    #[test]
    fn grover_single_iteration_exact_on_four_items() {
        let mgr = std::rc::Rc::new(crate::bdd::BddManager::new(3));
        let mut internal0 = crate::kernel::SymbolicState::basis(mgr, 1, &[false, false]);
        internal0.apply_gate(&GateOp::h(1));
        internal0.apply_gate(&GateOp::h(2));
        let res = run_sqc(internal0, &grover_sqc_spec(2, 3), &RunConfig::preset(&[true]), None).unwrap();
        assert_eq!(res.p_global, RootTwoRational::one());
    }

    #[test]
    fn grover_matches_dense_oracle() {
        let nd = 4u32;
        let marked = 5u64;
        let n = nd + 1;
        let body = grover_body_ops(nd, marked);
        for k in 1..=5u32 {
            let mut den = DenseState::basis(n, &vec![false; n as usize]);
            for q in 1..=nd {
                den.apply(&GateOp::h(q));
            }
            for j in 1..=k {
                den.apply_all(&body);
                den.measure(0, j == k);
            }
            let dense_p = den.norm_sq();

            let mgr = std::rc::Rc::new(crate::bdd::BddManager::new(n));
            let mut internal0 = crate::kernel::SymbolicState::basis(mgr, 1, &vec![false; nd as usize]);
            for q in 1..=nd {
                internal0.apply_gate(&GateOp::h(q));
            }
            let mut pattern = vec![false; k as usize - 1];
            pattern.push(true);
            let res = run_sqc(internal0, &grover_sqc_spec(nd, marked), &RunConfig::preset(&pattern), None).unwrap();
            assert_eq!(res.p_global, dense_p, "k = {k}");
        }
    }

    #[test]
    fn grover_gate_count_formula() {
        // this construction: oracle (1 + 2z) + diffusion (4·nd + 1) +
        // flag raise (1 + 2z) with z zero-bits in the marked index
        for (nd, marked) in [(2u32, 3u64), (3, 5), (4, 0)] {
            let zeros = (0..nd).filter(|i| (marked >> i) & 1 == 0).count();
            let count = grover_body_ops(nd, marked).len();
            assert_eq!(count, (4 * nd + 3) as usize + 4 * zeros);
        }
    }

    #[test]
    fn random_while_runs_in_sample_mode() {
        let text = gen_random_while(5, 15, 2, 3);
        let ir = parse_and_analyze(&text).unwrap();
        for seed in 0..20 {
            let res = run(&ir, &RunConfig::sample(seed)).unwrap();
            assert!(matches!(res.status, RunStatus::Ok | RunStatus::MaxIterations));
            assert_eq!(res.p_global, res.state.norm_sq());
        }
    }
}
