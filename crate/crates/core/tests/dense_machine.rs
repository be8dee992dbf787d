//! Independent dense-state program interpreter, used only as a brute-force
//! oracle. It re-implements block execution over [`DenseState`] from scratch
//! so the path it checks shares nothing with the symbolic executor beyond
//! the program representation.

use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sqcsim_core::dense::DenseState;
use sqcsim_core::qasm::{BitSource, Block, BlockTree, Condition, Dqc, Op, ProgramIR};
use sqcsim_core::scalar::RootTwoRational;

#[allow(dead_code)]
pub struct DenseMachine {
    pub state: DenseState,
    pub bits: Vec<Option<bool>>,
    pub p_global: RootTwoRational,
    pub total_iterations: u64,
    pub capped: bool,
    preset: Vec<bool>,
    preset_pos: usize,
    rng: Option<ChaCha8Rng>,
    max_iterations: u64,
    stopped: bool,
}

#[derive(Debug)]
pub enum DenseError {
    PresetExhausted,
    TooManyQubits,
}

impl std::fmt::Display for DenseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DenseError::PresetExhausted => write!(f, "dense oracle: preset exhausted"),
            DenseError::TooManyQubits => write!(f, "dense oracle: too many qubits"),
        }
    }
}

#[allow(dead_code)]
impl DenseMachine {
    pub fn run_preset(ir: &ProgramIR, preset: &[bool]) -> Result<DenseMachine, DenseError> {
        Self::run(ir, preset.to_vec(), None, 1000)
    }

    pub fn run_sampled(ir: &ProgramIR, seed: u64, max_iterations: u64) -> Result<DenseMachine, DenseError> {
        Self::run(ir, Vec::new(), Some(ChaCha8Rng::seed_from_u64(seed)), max_iterations)
    }

    fn run(
        ir: &ProgramIR,
        preset: Vec<bool>,
        rng: Option<ChaCha8Rng>,
        max_iterations: u64,
    ) -> Result<DenseMachine, DenseError> {
        if ir.num_qubits > sqcsim_core::dense::MAX_QUBITS {
            return Err(DenseError::TooManyQubits);
        }
        let n = ir.num_qubits.max(1);
        let mut m = DenseMachine {
            state: DenseState::basis(n, &vec![false; n as usize]),
            bits: vec![Some(false); ir.num_bits as usize],
            p_global: RootTwoRational::one(),
            total_iterations: 0,
            capped: false,
            preset,
            preset_pos: 0,
            rng,
            max_iterations,
            stopped: false,
        };
        m.exec(&ir.blocks)?;
        Ok(m)
    }

    fn read(&self, source: &BitSource) -> u64 {
        match source {
            BitSource::Single(b) => self.bits[*b as usize].unwrap_or(false) as u64,
            BitSource::Register { base, len } => (0..*len)
                .map(|i| (self.bits[(base + i) as usize].unwrap_or(false) as u64) << i)
                .sum(),
        }
    }

    fn guard(&self, cond: &Condition) -> bool {
        (self.read(&cond.source) == cond.value) == cond.equal
    }

    fn exec(&mut self, blocks: &BlockTree) -> Result<(), DenseError> {
        for block in blocks {
            if self.stopped {
                return Ok(());
            }
            match block {
                Block::Cqc(ops) => {
                    for op in ops {
                        if self.stopped {
                            return Ok(());
                        }
                        match op {
                            Op::Gate(g) => self.state.apply(g),
                            Op::Measure { qubit, bit, is_final, .. } => {
                                if !*is_final {
                                    self.measure(*qubit, *bit)?;
                                }
                            }
                        }
                    }
                }
                Block::Dqc(Dqc::If { cond, then_blocks, else_blocks }) => {
                    if self.guard(cond) {
                        self.exec(then_blocks)?;
                    } else {
                        self.exec(else_blocks)?;
                    }
                }
                Block::Dqc(Dqc::Switch { scrutinee, cases, default }) => {
                    let value = self.read(scrutinee);
                    let branch = cases
                        .iter()
                        .find(|(labels, _)| labels.contains(&value))
                        .map(|(_, body)| body)
                        .unwrap_or(default);
                    self.exec(branch)?;
                }
                Block::Sqc { guard, body } => {
                    let mut iters = 0u64;
                    while self.guard(guard) && !self.stopped {
                        if iters >= self.max_iterations {
                            self.capped = true;
                            self.stopped = true;
                            break;
                        }
                        iters += 1;
                        self.total_iterations += 1;
                        self.exec(body)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn measure(&mut self, qubit: u32, bit: u32) -> Result<(), DenseError> {
        let (p0, p1) = self.state.probs(qubit);
        let total = &p0 + &p1;
        let p0n = &p0 / &total;
        let b = match &mut self.rng {
            Some(rng) => {
                let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                u >= p0n.p.to_f64().unwrap_or(0.0) + p0n.q.to_f64().unwrap_or(0.0) * std::f64::consts::SQRT_2
            }
            None => {
                let Some(&b) = self.preset.get(self.preset_pos) else {
                    return Err(DenseError::PresetExhausted);
                };
                self.preset_pos += 1;
                b
            }
        };
        let conditional = if b { &RootTwoRational::one() - &p0n } else { p0n };
        self.p_global = &self.p_global * &conditional;
        self.state.measure(qubit, b);
        self.bits[bit as usize] = Some(b);
        if conditional.is_zero() {
            self.stopped = true;
        }
        Ok(())
    }
}
