//! Block-tree execution with exact path-probability accumulation.
//!
//! [`run`] walks a program's block tree over one symbolic state and a
//! classical store: straight-line blocks apply gate updates and
//! measurements, branch blocks read guard bits and recurse, loop blocks
//! re-execute their body while the guard holds. Mid-circuit measurements
//! collapse the state immediately (sampling the exact distribution or
//! consuming a preset outcome) and multiply the chosen conditional
//! probability into `p_global`; final measurements are deferred and reported
//! as marginals of the final state. States stay unnormalized after collapse,
//! so `p_global = norm_sq(final state)` holds exactly throughout.
//!
//! [`run_sqc`] drives a fixed iteration frame in the sequential style
//! instead: compose a fresh external basis input with the internal state,
//! execute the body, measure the external register, retain the internal
//! part, and repeat while the guard holds.

use crate::bdd::BddManager;
use crate::kernel::{GateOp, RegisterPartition, StateStats, SymbolicState};
use crate::qasm::{BitSource, Block, BlockTree, Condition, Dqc, Op, ProgramIR};
use crate::scalar::RootTwoRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::rc::Rc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Sample,
    Preset,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    /// Preset outcomes, consumed in dynamic measurement order.
    pub preset: Vec<bool>,
    pub seed: u64,
    pub max_iterations: u64,
    /// Initial bit-width of the amplitude slices (≥ 2).
    pub r_init: usize,
    /// Qubit cap for amplitude dumps.
    pub extract_limit: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Sample,
            preset: Vec::new(),
            seed: 0,
            max_iterations: 1000,
            r_init: 2,
            extract_limit: crate::kernel::DEFAULT_EXTRACT_LIMIT,
        }
    }
}

impl RunConfig {
    pub fn preset(outcomes: &[bool]) -> Self {
        RunConfig { mode: Mode::Preset, preset: outcomes.to_vec(), ..Default::default() }
    }

    pub fn sample(seed: u64) -> Self {
        RunConfig { mode: Mode::Sample, seed, ..Default::default() }
    }
}

/// Classical bit store with a write history. Declared bits start as written
/// zeros (the value hardware resets report); `unwritten` builds a store
/// without that convention for callers that want strict checking.
#[derive(Clone, Debug)]
pub struct ClassicalStore {
    vals: Vec<Option<bool>>,
    history: Vec<(u32, bool)>,
}

impl ClassicalStore {
    pub fn zeroed(n: u32) -> Self {
        ClassicalStore { vals: vec![Some(false); n as usize], history: Vec::new() }
    }

    pub fn unwritten(n: u32) -> Self {
        ClassicalStore { vals: vec![None; n as usize], history: Vec::new() }
    }

    pub fn write(&mut self, bit: u32, v: bool) {
        self.vals[bit as usize] = Some(v);
        self.history.push((bit, v));
    }

    pub fn read(&self, bit: u32) -> Option<bool> {
        self.vals.get(bit as usize).copied().flatten()
    }

    pub fn history(&self) -> &[(u32, bool)] {
        &self.history
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.vals
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("preset outcome list exhausted")]
    PresetExhausted,
    #[error("guard reads unmeasured bit {bit}")]
    GuardUnwritten { bit: u32 },
}

/// Evaluate a guard against the store. Register reads are little-endian
/// (bit 0 is least significant); unwritten bits are an error.
pub fn guard_eval(store: &ClassicalStore, cond: &Condition) -> Result<bool, RunError> {
    let value = read_source(store, &cond.source)?;
    Ok((value == cond.value) == cond.equal)
}

fn read_source(store: &ClassicalStore, source: &BitSource) -> Result<u64, RunError> {
    match source {
        BitSource::Single(b) => match store.read(*b) {
            Some(v) => Ok(v as u64),
            None => Err(RunError::GuardUnwritten { bit: *b }),
        },
        BitSource::Register { base, len } => {
            let mut value = 0u64;
            for i in 0..*len {
                match store.read(base + i) {
                    Some(true) => value |= 1 << i,
                    Some(false) => {}
                    None => return Err(RunError::GuardUnwritten { bit: base + i }),
                }
            }
            Ok(value)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    /// A loop hit the iteration cap; the result is a flagged partial run.
    MaxIterations,
    /// A preset outcome had probability zero; `p_global` is exactly 0.
    UnreachableOutcome,
}

#[derive(Clone, Debug)]
pub struct DeferredMeasurement {
    pub qubit: u32,
    pub bit: u32,
    /// Normalized marginal distribution conditioned on the executed path.
    pub p0: RootTwoRational,
    pub p1: RootTwoRational,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub state: SymbolicState,
    pub p_global: RootTwoRational,
    pub store: ClassicalStore,
    pub deferred: Vec<DeferredMeasurement>,
    /// Mid-circuit outcomes in dynamic order.
    pub outcomes: Vec<bool>,
    /// Iteration count of each completed loop, in completion order.
    pub loop_counts: Vec<u64>,
    pub total_iterations: u64,
    pub status: RunStatus,
    pub stats: StateStats,
}

/// Execute a program end to end.
pub fn run(ir: &ProgramIR, cfg: &RunConfig) -> Result<RunResult, RunError> {
    assert!(cfg.r_init >= 2, "initial bit-width must be at least 2");
    let n = ir.num_qubits.max(1);
    let mgr = Rc::new(BddManager::new(n));
    let mut state = SymbolicState::basis(mgr, 0, &vec![false; n as usize]);
    state.widen_to(cfg.r_init);
    let mut machine = Machine::new(cfg, state, ClassicalStore::zeroed(ir.num_bits));
    machine.exec_blocks(&ir.blocks)?;
    Ok(machine.finish())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct Machine<'a> {
    cfg: &'a RunConfig,
    state: SymbolicState,
    store: ClassicalStore,
    rng: ChaCha8Rng,
    preset_pos: usize,
    p_global: RootTwoRational,
    outcomes: Vec<bool>,
    deferred: Vec<(u32, u32)>,
    loop_counts: Vec<u64>,
    total_iterations: u64,
    status: RunStatus,
}

impl<'a> Machine<'a> {
    fn new(cfg: &'a RunConfig, state: SymbolicState, store: ClassicalStore) -> Self {
        Machine {
            cfg,
            state,
            store,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            preset_pos: 0,
            p_global: RootTwoRational::one(),
            outcomes: Vec::new(),
            deferred: Vec::new(),
            loop_counts: Vec::new(),
            total_iterations: 0,
            status: RunStatus::Ok,
        }
    }

    fn exec_blocks(&mut self, blocks: &BlockTree) -> Result<Flow, RunError> {
        for block in blocks {
            match block {
                Block::Cqc(ops) => {
                    for op in ops {
                        match op {
                            Op::Gate(g) => self.state.apply_gate(g),
                            Op::Measure { qubit, bit, is_final, .. } => {
                                if *is_final {
                                    self.deferred.push((*qubit, *bit));
                                } else if self.handle_measure(*qubit, *bit)? == Flow::Stop {
                                    return Ok(Flow::Stop);
                                }
                            }
                        }
                    }
                }
                Block::Dqc(Dqc::If { cond, then_blocks, else_blocks }) => {
                    let branch = if guard_eval(&self.store, cond)? { then_blocks } else { else_blocks };
                    if self.exec_blocks(branch)? == Flow::Stop {
                        return Ok(Flow::Stop);
                    }
                }
                Block::Dqc(Dqc::Switch { scrutinee, cases, default }) => {
                    let value = read_source(&self.store, scrutinee)?;
                    let branch = cases
                        .iter()
                        .find(|(labels, _)| labels.contains(&value))
                        .map(|(_, body)| body)
                        .unwrap_or(default);
                    if self.exec_blocks(branch)? == Flow::Stop {
                        return Ok(Flow::Stop);
                    }
                }
                Block::Sqc { guard, body } => {
                    let mut iters = 0u64;
                    loop {
                        if !guard_eval(&self.store, guard)? {
                            break;
                        }
                        if iters >= self.cfg.max_iterations {
                            self.status = RunStatus::MaxIterations;
                            self.loop_counts.push(iters);
                            return Ok(Flow::Stop);
                        }
                        iters += 1;
                        self.total_iterations += 1;
                        if self.exec_blocks(body)? == Flow::Stop {
                            self.loop_counts.push(iters);
                            return Ok(Flow::Stop);
                        }
                    }
                    self.loop_counts.push(iters);
                }
            }
        }
        Ok(Flow::Continue)
    }

    /// Mid-circuit measurement: exact conditional distribution, outcome by
    /// sampling or preset, collapse, store write.
    fn handle_measure(&mut self, qubit: u32, bit: u32) -> Result<Flow, RunError> {
        let (p0, p1) = self.state.get_prob(qubit);
        let total = &p0 + &p1;
        assert!(!total.is_zero(), "measurement on an all-zero state");
        let p0n = &p0 / &total;
        let b = match self.cfg.mode {
            Mode::Sample => self.unit_f64() >= p0n.to_f64(),
            Mode::Preset => {
                let Some(&b) = self.cfg.preset.get(self.preset_pos) else {
                    return Err(RunError::PresetExhausted);
                };
                self.preset_pos += 1;
                b
            }
        };
        self.outcomes.push(b);
        let conditional = if b { &RootTwoRational::one() - &p0n } else { p0n };
        self.p_global = &self.p_global * &conditional;
        // collapse even for an impossible outcome: the state becomes the
        // zero vector, keeping p_global = norm_sq exact before stopping
        self.state.mid_measure(qubit, b);
        self.store.write(bit, b);
        if conditional.is_zero() {
            self.status = RunStatus::UnreachableOutcome;
            return Ok(Flow::Stop);
        }
        Ok(Flow::Continue)
    }

    fn unit_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn finish(self) -> RunResult {
        let deferred = self
            .deferred
            .iter()
            .map(|&(qubit, bit)| {
                let (p0, p1) = self.state.get_prob(qubit);
                let total = &p0 + &p1;
                if total.is_zero() {
                    DeferredMeasurement { qubit, bit, p0: RootTwoRational::zero(), p1: RootTwoRational::zero() }
                } else {
                    DeferredMeasurement { qubit, bit, p0: &p0 / &total, p1: &p1 / &total }
                }
            })
            .collect();
        let stats = self.state.stats();
        RunResult {
            state: self.state,
            p_global: self.p_global,
            store: self.store,
            deferred,
            outcomes: self.outcomes,
            loop_counts: self.loop_counts,
            total_iterations: self.total_iterations,
            status: self.status,
            stats,
        }
    }
}

// ---------------------------------------------------------------------------
// Result reporting
// ---------------------------------------------------------------------------

pub fn status_str(s: RunStatus) -> &'static str {
    match s {
        RunStatus::Ok => "ok",
        RunStatus::MaxIterations => "max_iter",
        RunStatus::UnreachableOutcome => "unreachable",
    }
}

pub fn prob_json(p: &RootTwoRational) -> serde_json::Value {
    serde_json::json!({
        "rational": p.p.to_string(),
        "sqrt2_coeff": p.q.to_string(),
        "float": p.to_f64(),
    })
}

/// The machine-readable result document; `docs/result.schema.json` describes
/// this shape.
pub fn result_json(ir: &ProgramIR, r: &RunResult, dump_state: bool, extract_limit: u32) -> serde_json::Value {
    use serde_json::json;
    let bits: serde_json::Map<String, serde_json::Value> = ir
        .bit_regs
        .iter()
        .map(|reg| {
            let vals: Vec<serde_json::Value> = (0..reg.size)
                .map(|i| match r.store.read(reg.base + i) {
                    Some(v) => json!(v as u8),
                    None => serde_json::Value::Null,
                })
                .collect();
            (reg.name.clone(), json!(vals))
        })
        .collect();
    let deferred: Vec<_> = r
        .deferred
        .iter()
        .map(|d| {
            json!({
                "qubit": ir.qubit_name(d.qubit),
                "bit": ir.bit_name(d.bit),
                "p0": prob_json(&d.p0),
                "p1": prob_json(&d.p1),
            })
        })
        .collect();
    let mut out = json!({
        "status": status_str(r.status),
        "p_global": prob_json(&r.p_global),
        "classical_bits": bits,
        "iterations": r.total_iterations,
        "loop_counts": r.loop_counts,
        "outcomes": r.outcomes.iter().map(|&b| b as u8).collect::<Vec<u8>>(),
        "deferred_measurements": deferred,
        "stats": {
            "peak_nodes": r.stats.peak_nodes,
            "slice_nodes": r.stats.slice_nodes,
            "wmc_count_calls": r.stats.wmc_count_calls,
        },
    });
    if dump_state {
        match r.state.dump_json(extract_limit) {
            Ok(v) => out["state"] = v,
            Err(e) => out["state_error"] = serde_json::json!(e.to_string()),
        }
    }
    out
}

pub fn reach_json(r: &ReachResult) -> serde_json::Value {
    serde_json::json!({
        "reachable": r.reachable,
        "probability": prob_json(&r.probability),
        "status": status_str(r.run.status),
        "iterations": r.run.total_iterations,
        "p_global": prob_json(&r.run.p_global),
    })
}

/// Full sampling of the deferred final measurements: chained conditional
/// distributions with collapse, so correlations between final outcomes are
/// respected. Returns one outcome per deferred measurement, in order.
pub fn sample_final_measurements(result: &RunResult, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = result.state.clone();
    let mut outcomes = Vec::with_capacity(result.deferred.len());
    for d in &result.deferred {
        let (p0, p1) = state.get_prob(d.qubit);
        let total = &p0 + &p1;
        let b = if total.is_zero() {
            false
        } else {
            let p0n = (&p0 / &total).to_f64();
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            u >= p0n
        };
        state.mid_measure(d.qubit, b);
        outcomes.push(b);
    }
    outcomes
}

// ---------------------------------------------------------------------------
// Reachability queries
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ReachResult {
    pub reachable: bool,
    pub probability: RootTwoRational,
    pub run: RunResult,
}

/// Run a preset outcome pattern and report whether it (and an optional basis
/// constraint on chosen qubits) is reachable, with its exact probability.
pub fn reach_query(
    ir: &ProgramIR,
    pattern: &[bool],
    target: Option<&[(u32, bool)]>,
) -> Result<ReachResult, RunError> {
    let cfg = RunConfig::preset(pattern);
    let run = self::run(ir, &cfg)?;
    let probability = match target {
        Some(constraints) => {
            let mut s = run.state.clone();
            for &(q, b) in constraints {
                s.mid_measure(q, b);
            }
            s.norm_sq()
        }
        None => run.p_global.clone(),
    };
    let reachable = probability.sign() == std::cmp::Ordering::Greater;
    Ok(ReachResult { reachable, probability, run })
}

// ---------------------------------------------------------------------------
// Sequential-circuit engine (composition / retention)
// ---------------------------------------------------------------------------

/// One iteration frame for the sequential engine: external register
/// `q0..q_{m−1}`, internal register behind it, a body over the full frame,
/// and the guard that keeps the loop running. External measurement outcomes
/// are written to `external_bits` (one classical bit per external qubit) at
/// the end of every iteration, before the guard is re-evaluated.
#[derive(Clone, Debug)]
pub struct SqcSpec {
    pub partition: RegisterPartition,
    pub num_bits: u32,
    pub body: BlockTree,
    /// Gates applied right after composition, before the body; used to
    /// prepare non-basis external inputs.
    pub ext_prep: Vec<GateOp>,
    pub external_bits: Vec<u32>,
    pub guard: Condition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqcStatus {
    /// The guard became false.
    Completed,
    /// Preset mode: the outcome prefix was fully consumed while the guard
    /// still held (a bounded unrolling).
    PrefixConsumed,
    MaxIterations,
    UnreachableOutcome,
}

#[derive(Clone)]
pub struct SqcIterTrace {
    /// Joint state after the body, before the external measurement.
    pub pre_measure: SymbolicState,
    pub outcomes: Vec<bool>,
    /// Internal state carried to the next iteration.
    pub retained: SymbolicState,
}

pub struct SqcResult {
    pub internal: SymbolicState,
    pub p_global: RootTwoRational,
    pub iterations: Vec<SqcIterTrace>,
    pub status: SqcStatus,
    pub store: ClassicalStore,
}

/// Iterate the frame: compose a fresh external basis input with the internal
/// state, run the body, measure the external register against sampled or
/// preset outcomes (accumulating the exact conditional probabilities into
/// `p_global`), retain the internal part, and continue while the guard holds.
///
/// `inputs` supplies one external basis index per iteration; missing entries
/// default to all zeros.
pub fn run_sqc(
    internal0: SymbolicState,
    spec: &SqcSpec,
    cfg: &RunConfig,
    inputs: Option<&[Vec<bool>]>,
) -> Result<SqcResult, RunError> {
    let m = spec.partition.external as usize;
    assert_eq!(spec.external_bits.len(), m, "one classical bit per external qubit");
    assert_eq!(internal0.base(), spec.partition.external, "internal state must sit behind the external register");
    assert_eq!(internal0.num_qubits(), spec.partition.internal);
    let mut machine = Machine::new(cfg, internal0.clone(), ClassicalStore::zeroed(spec.num_bits));
    let mut internal = internal0;
    let mut iterations = Vec::new();
    let status;
    let mut iter_count = 0u64;
    'outer: loop {
        if !guard_eval(&machine.store, &spec.guard)? {
            status = SqcStatus::Completed;
            break;
        }
        if cfg.mode == Mode::Preset && machine.preset_pos >= cfg.preset.len() {
            status = SqcStatus::PrefixConsumed;
            break;
        }
        if iter_count >= cfg.max_iterations {
            status = SqcStatus::MaxIterations;
            break;
        }
        iter_count += 1;
        let default_input = vec![false; m];
        let ext_input = inputs
            .and_then(|xs| xs.get(iter_count as usize - 1))
            .map(|v| v.as_slice())
            .unwrap_or(&default_input);
        assert_eq!(ext_input.len(), m, "external input width mismatch");
        machine.state = SymbolicState::compose(ext_input, &internal);
        machine.state.apply_all(&spec.ext_prep);
        if machine.exec_blocks(&spec.body)? == Flow::Stop {
            status = match machine.status {
                RunStatus::UnreachableOutcome => SqcStatus::UnreachableOutcome,
                _ => SqcStatus::MaxIterations,
            };
            internal = machine.state.clone();
            break;
        }
        let pre_measure = machine.state.clone();
        // external register measurement, one qubit at a time
        let mut ext_outcomes = Vec::with_capacity(m);
        for j in 0..m {
            match machine.handle_measure(j as u32, spec.external_bits[j])? {
                Flow::Continue => ext_outcomes.push(*machine.outcomes.last().unwrap()),
                Flow::Stop => {
                    status = SqcStatus::UnreachableOutcome;
                    internal = machine.state.clone();
                    break 'outer;
                }
            }
        }
        internal = machine.state.retain(&ext_outcomes);
        iterations.push(SqcIterTrace { pre_measure, outcomes: ext_outcomes, retained: internal.clone() });
    }
    Ok(SqcResult {
        internal,
        p_global: machine.p_global,
        iterations,
        status,
        store: machine.store,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_and_analyze;

    const RUS: &str = r#"
qubit[2] q;
bit c;
while (c == 0) {
  h q[0];
  cx q[0], q[1];
  c = measure q[0];
  reset q[0];
}
"#;

    fn rus_ir() -> ProgramIR {
        parse_and_analyze(RUS).unwrap()
    }

    fn rt(n: i64, d: i64) -> RootTwoRational {
        RootTwoRational::from_ratio(n, d)
    }

    #[test]
    fn guard_eval_examples() {
        let mut store = ClassicalStore::unwritten(2);
        store.write(0, false);
        let c_eq_0 = Condition { source: BitSource::Single(0), equal: true, value: 0 };
        assert!(guard_eval(&store, &c_eq_0).unwrap());
        // little-endian register compare: c[0]=1, c[1]=0 means c == 1
        store.write(0, true);
        store.write(1, false);
        let reg_eq_1 = Condition { source: BitSource::Register { base: 0, len: 2 }, equal: true, value: 1 };
        assert!(guard_eval(&store, &reg_eq_1).unwrap());
        // unwritten bit errors
        let fresh = ClassicalStore::unwritten(1);
        let err = guard_eval(&fresh, &c_eq_0).unwrap_err();
        assert!(matches!(err, RunError::GuardUnwritten { bit: 0 }));
    }

    #[test]
    fn rus_preset_one_iteration() {
        let ir = rus_ir();
        let res = run(&ir, &RunConfig::preset(&[true])).unwrap();
        assert_eq!(res.status, RunStatus::Ok);
        assert_eq!(res.p_global, rt(1, 2));
        assert_eq!(res.total_iterations, 1);
        assert_eq!(res.state.norm_sq(), rt(1, 2));
        // target qubit q1 ends in |1⟩ on this path
        let (p0, p1) = res.state.get_prob(1);
        assert!(p0.is_zero());
        assert_eq!(p1, rt(1, 2));
    }

    #[test]
    fn rus_preset_two_iterations() {
        let ir = rus_ir();
        let res = run(&ir, &RunConfig::preset(&[false, true])).unwrap();
        assert_eq!(res.p_global, rt(1, 4));
        assert_eq!(res.total_iterations, 2);
        assert_eq!(res.state.norm_sq(), rt(1, 4));
    }

    #[test]
    fn rus_path_law() {
        let ir = rus_ir();
        for k in 1..=12u32 {
            let mut pattern = vec![false; k as usize - 1];
            pattern.push(true);
            let res = run(&ir, &RunConfig::preset(&pattern)).unwrap();
            assert_eq!(res.p_global, rt(1, 1 << k), "k = {k}");
        }
    }

    #[test]
    fn preset_exhausted_is_an_error() {
        let ir = rus_ir();
        let err = run(&ir, &RunConfig::preset(&[false])).unwrap_err();
        assert!(matches!(err, RunError::PresetExhausted));
    }

    #[test]
    fn max_iterations_flagged() {
        let ir = rus_ir();
        let cfg = RunConfig { max_iterations: 5, ..RunConfig::preset(&[false; 32]) };
        let res = run(&ir, &cfg).unwrap();
        assert_eq!(res.status, RunStatus::MaxIterations);
        assert_eq!(res.total_iterations, 5);
        assert_eq!(res.p_global, rt(1, 32));
    }

    #[test]
    fn unreachable_preset_flagged() {
        // measuring |0⟩ as 1 has probability zero
        let ir = parse_and_analyze("qubit[1] q;\nbit c;\nc = measure q[0];\nx q[0];").unwrap();
        let res = run(&ir, &RunConfig::preset(&[true])).unwrap();
        assert_eq!(res.status, RunStatus::UnreachableOutcome);
        assert!(res.p_global.is_zero());
    }

    #[test]
    fn sample_mode_is_deterministic_per_seed() {
        let ir = rus_ir();
        let a = run(&ir, &RunConfig::sample(1)).unwrap();
        let b = run(&ir, &RunConfig::sample(1)).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.p_global, b.p_global);
        assert_eq!(a.total_iterations, b.total_iterations);
    }

    #[test]
    fn sample_mode_rus_frequency() {
        // fraction of seeded runs terminating at iteration 1 is within ±0.02
        // of 1/2 over 10000 runs (binomial 3σ ≈ 0.015)
        let ir = rus_ir();
        let mut first_iter = 0u32;
        let runs = 10_000;
        for seed in 0..runs {
            let res = run(&ir, &RunConfig::sample(seed as u64)).unwrap();
            assert_eq!(res.status, RunStatus::Ok);
            if res.total_iterations == 1 {
                first_iter += 1;
            }
        }
        let frac = first_iter as f64 / runs as f64;
        assert!((frac - 0.5).abs() < 0.02, "fraction {frac}");
    }

    #[test]
    fn final_measure_reports_marginals() {
        let ir = parse_and_analyze("qubit[2] q;\nbit[2] c;\nh q[0];\ncx q[0], q[1];\nc = measure q;").unwrap();
        let res = run(&ir, &RunConfig::sample(3)).unwrap();
        assert_eq!(res.deferred.len(), 2);
        for d in &res.deferred {
            assert_eq!(d.p0, rt(1, 2));
            assert_eq!(d.p1, rt(1, 2));
        }
        // deferral leaves the state uncollapsed
        assert_eq!(res.state.norm_sq(), RootTwoRational::one());
        assert_eq!(res.p_global, RootTwoRational::one());
    }

    #[test]
    fn deferred_sampling_respects_correlations() {
        // entangled pair: both deferred outcomes must agree in every sample
        let ir = parse_and_analyze("qubit[2] q;\nbit[2] c;\nh q[0];\ncx q[0], q[1];\nc = measure q;").unwrap();
        let res = run(&ir, &RunConfig::sample(1)).unwrap();
        for seed in 0..50 {
            let outcomes = sample_final_measurements(&res, seed);
            assert_eq!(outcomes[0], outcomes[1], "seed {seed}");
        }
        // deterministic per seed
        assert_eq!(sample_final_measurements(&res, 9), sample_final_measurements(&res, 9));
    }

    #[test]
    fn sqc_ext_prep_prepares_non_basis_inputs() {
        // external |+⟩ via a preparatory H after composition: an empty body
        // then measures the external qubit with probability 1/2 each way
        let mgr = Rc::new(BddManager::new(2));
        let internal0 = SymbolicState::basis(mgr, 1, &[false]);
        let spec = SqcSpec {
            partition: RegisterPartition::new(1, 1),
            num_bits: 1,
            body: vec![Block::Cqc(vec![])],
            ext_prep: vec![GateOp::h(0)],
            external_bits: vec![0],
            guard: Condition { source: BitSource::Single(0), equal: true, value: 0 },
        };
        let res = run_sqc(internal0, &spec, &RunConfig::preset(&[false, true]), None).unwrap();
        assert_eq!(res.status, SqcStatus::Completed);
        assert_eq!(res.p_global, rt(1, 4));
        assert_eq!(res.iterations.len(), 2);
    }

    #[test]
    fn if_else_matches_inlined_branches() {
        // executing a branch under a preset measurement equals the
        // straight-line program with that branch inlined
        let branchy = parse_and_analyze(
            "qubit[2] q;\nbit c;\nh q[0];\nc = measure q[0];\nif (c == 1) { x q[1]; } else { h q[1]; }\n",
        )
        .unwrap();
        // the trailing empty if keeps the measurement mid-circuit in the
        // inlined programs too, so both sides collapse identically
        let inline_then =
            parse_and_analyze("qubit[2] q;\nbit c;\nh q[0];\nc = measure q[0];\nx q[1];\nif (c == 0) {\n}\n").unwrap();
        let inline_else =
            parse_and_analyze("qubit[2] q;\nbit c;\nh q[0];\nc = measure q[0];\nh q[1];\nif (c == 0) {\n}\n").unwrap();
        for (outcome, inlined) in [(true, &inline_then), (false, &inline_else)] {
            let a = run(&branchy, &RunConfig::preset(&[outcome])).unwrap();
            let b = run(inlined, &RunConfig::preset(&[outcome])).unwrap();
            assert_eq!(a.p_global, b.p_global);
            assert!(a.state.amplitude_eq(&b.state));
        }
    }

    #[test]
    fn switch_selects_cases_and_default() {
        let text = r#"
qubit[2] q;
bit[2] c;
h q[0];
c[0] = measure q[0];
switch (c) {
  case 0 { x q[1]; }
  case 1 { z q[1]; }
  default { h q[1]; }
}
"#;
        let ir = parse_and_analyze(text).unwrap();
        let res = run(&ir, &RunConfig::preset(&[false])).unwrap();
        // case 0 applies X: q1 is |1⟩ on this path
        let (p0, p1) = res.state.get_prob(1);
        assert!(p0.is_zero());
        assert_eq!(p1, rt(1, 2));
        let res = run(&ir, &RunConfig::preset(&[true])).unwrap();
        // case 1 applies Z: q1 stays |0⟩
        let (p0, p1) = res.state.get_prob(1);
        assert_eq!(p0, rt(1, 2));
        assert!(p1.is_zero());
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        // enumerate all preset patterns of a program with two measurements
        let text = "qubit[2] q;\nbit[2] c;\nh q[0];\nc[0] = measure q[0];\nif (c[0] == 1) { h q[1]; }\nc[1] = measure q[1];\nz q[1];\n";
        let ir = parse_and_analyze(text).unwrap();
        let mut total = RootTwoRational::zero();
        for bits in 0..4u32 {
            let pattern = [(bits & 1) != 0, (bits & 2) != 0];
            let res = run(&ir, &RunConfig::preset(&pattern)).unwrap();
            total = &total + &res.p_global;
            assert_eq!(res.p_global, res.state.norm_sq());
        }
        assert_eq!(total, RootTwoRational::one());
    }

    #[test]
    fn nested_while_loops() {
        // outer loop reruns the inner loop; preset drives both guards
        let text = r#"
qubit[2] q;
bit a;
bit b;
while (a == 0) {
  while (b == 0) {
    h q[1];
    b = measure q[1];
    reset q[1];
  }
  h q[0];
  a = measure q[0];
  reset q[0];
  reset q[1];
}
"#;
        let ir = parse_and_analyze(text).unwrap();
        // inner runs twice (outcomes 0,1), outer continues (0); on re-entry
        // the inner guard is already false, so the last outcome (1) ends the
        // outer loop: 2 + 0 inner + 2 outer = 4 iterations, p = 1/16
        let res = run(&ir, &RunConfig::preset(&[false, true, false, true])).unwrap();
        assert_eq!(res.status, RunStatus::Ok);
        assert_eq!(res.total_iterations, 4);
        assert_eq!(res.p_global, rt(1, 16));
        assert_eq!(res.p_global, res.state.norm_sq());
    }

    #[test]
    fn reach_query_on_rus() {
        let ir = rus_ir();
        let r = reach_query(&ir, &[false, false, true], None).unwrap();
        assert!(r.reachable);
        assert_eq!(r.probability, rt(1, 8));
        // with a consistent target
        let r = reach_query(&ir, &[true], Some(&[(1, true)])).unwrap();
        assert!(r.reachable);
        assert_eq!(r.probability, rt(1, 2));
        // with an impossible target
        let r = reach_query(&ir, &[true], Some(&[(1, false)])).unwrap();
        assert!(!r.reachable);
        assert!(r.probability.is_zero());
    }

    // -- sequential engine ---------------------------------------------------

    fn rus_sqc_spec() -> SqcSpec {
        SqcSpec {
            partition: RegisterPartition::new(1, 1),
            num_bits: 1,
            body: vec![Block::Cqc(vec![Op::Gate(GateOp::h(0)), Op::Gate(GateOp::cx(0, 1))])],
            ext_prep: vec![],
            external_bits: vec![0],
            guard: Condition { source: BitSource::Single(0), equal: true, value: 0 },
        }
    }

    #[test]
    fn sqc_rus_one_iteration_trace() {
        let mgr = Rc::new(BddManager::new(2));
        let internal0 = SymbolicState::basis(mgr.clone(), 1, &[false]);
        let spec = rus_sqc_spec();
        let res = run_sqc(internal0, &spec, &RunConfig::preset(&[true]), None).unwrap();
        assert_eq!(res.status, SqcStatus::Completed);
        assert_eq!(res.p_global, rt(1, 2));
        assert_eq!(res.iterations.len(), 1);
        let it = &res.iterations[0];
        // joint state before measurement: slice q0q1 ∨ ¬q0¬q1 at k = 1
        let expect = mgr.or(
            mgr.and(mgr.variable(0), mgr.variable(1)),
            mgr.and(mgr.literal(0, false), mgr.literal(1, false)),
        );
        assert_eq!(it.pre_measure.d_slice(0), expect);
        assert_eq!(it.pre_measure.scale_exponent(), 1);
        // retained internal: q1 at k = 1
        assert_eq!(it.retained.d_slice(0), mgr.variable(1));
        assert_eq!(it.retained.scale_exponent(), 1);
        // final internal state norm equals the path probability
        assert_eq!(res.internal.norm_sq(), rt(1, 2));
    }

    #[test]
    fn sqc_rus_two_iterations() {
        let mgr = Rc::new(BddManager::new(2));
        let internal0 = SymbolicState::basis(mgr, 1, &[false]);
        let res = run_sqc(internal0, &rus_sqc_spec(), &RunConfig::preset(&[false, true]), None).unwrap();
        assert_eq!(res.p_global, rt(1, 4));
        assert_eq!(res.iterations.len(), 2);
        // final internal state is |1⟩ (unnormalized)
        let amps = res.internal.extract_amplitudes(20).unwrap();
        assert_eq!(amps.len(), 1);
        assert_eq!(amps[0].0, vec![true]);
    }

    #[test]
    fn sqc_agrees_with_program_executor() {
        // the composition/retention route and the plain loop execution give
        // the same path probabilities
        let ir = rus_ir();
        for k in 1..=6u32 {
            let mut pattern = vec![false; k as usize - 1];
            pattern.push(true);
            let via_program = run(&ir, &RunConfig::preset(&pattern)).unwrap();
            let mgr = Rc::new(BddManager::new(2));
            let internal0 = SymbolicState::basis(mgr, 1, &[false]);
            let via_sqc = run_sqc(internal0, &rus_sqc_spec(), &RunConfig::preset(&pattern), None).unwrap();
            assert_eq!(via_program.p_global, via_sqc.p_global, "k = {k}");
        }
    }

    #[test]
    fn sqc_guard_false_before_first_iteration() {
        let mgr = Rc::new(BddManager::new(2));
        let internal0 = SymbolicState::basis(mgr, 1, &[true]);
        let mut spec = rus_sqc_spec();
        // guard that is false on the zero-initialized store
        spec.guard = Condition { source: BitSource::Single(0), equal: true, value: 1 };
        let res = run_sqc(internal0.clone(), &spec, &RunConfig::preset(&[true]), None).unwrap();
        assert_eq!(res.status, SqcStatus::Completed);
        assert_eq!(res.iterations.len(), 0);
        assert_eq!(res.p_global, RootTwoRational::one());
        assert!(res.internal.amplitude_eq(&internal0));
    }

    #[test]
    fn sqc_prefix_consumed_and_unreachable() {
        let mgr = Rc::new(BddManager::new(2));
        let internal0 = SymbolicState::basis(mgr, 1, &[false]);
        // all-zero prefix keeps the guard true until the prefix runs out
        let res = run_sqc(internal0.clone(), &rus_sqc_spec(), &RunConfig::preset(&[false, false]), None).unwrap();
        assert_eq!(res.status, SqcStatus::PrefixConsumed);
        assert_eq!(res.p_global, rt(1, 4));
        // an impossible external outcome is flagged with p = 0
        let mut spec = rus_sqc_spec();
        spec.body = vec![Block::Cqc(vec![])];
        let res = run_sqc(internal0, &spec, &RunConfig::preset(&[true]), None).unwrap();
        assert_eq!(res.status, SqcStatus::UnreachableOutcome);
        assert!(res.p_global.is_zero());
    }

    #[test]
    fn sqc_per_iteration_external_inputs() {
        // extended loops inject a chosen external basis state per iteration;
        // with an empty body the external outcome just reads that input back
        let mgr = Rc::new(BddManager::new(2));
        let internal0 = SymbolicState::basis(mgr, 1, &[false]);
        let spec = SqcSpec {
            partition: RegisterPartition::new(1, 1),
            num_bits: 1,
            body: vec![Block::Cqc(vec![])],
            ext_prep: vec![],
            external_bits: vec![0],
            guard: Condition { source: BitSource::Single(0), equal: true, value: 0 },
        };
        let inputs = vec![vec![false], vec![true]];
        let res = run_sqc(internal0, &spec, &RunConfig::preset(&[false, true]), Some(&inputs)).unwrap();
        // both outcomes are certain, so the path has probability 1
        assert_eq!(res.status, SqcStatus::Completed);
        assert_eq!(res.p_global, RootTwoRational::one());
        assert_eq!(res.iterations.len(), 2);
    }
}
