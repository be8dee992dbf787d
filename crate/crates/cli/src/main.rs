//! Command-line entry point.
//!
//! Exit codes: 0 success (including flagged `max_iter`/`unreachable` runs),
//! 1 parse/analyze diagnostics (JSON on stderr), 2 runtime errors.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sqcsim_core::bench::BenchSpec;
use sqcsim_core::exec::{self, reach_json, result_json, status_str, Mode, RunConfig, RunResult};
use sqcsim_core::qasm::{self, ProgramIR};
use sqcsim_core::scalar::format_float;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "sqcsim", version, about = "Symbolic simulator for quantum programs with while loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sample,
    Preset,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a program and report the exact path probability.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "sample")]
        mode: ModeArg,
        /// Comma-separated outcome list, consumed in dynamic order (preset mode).
        #[arg(long, value_delimiter = ',')]
        preset: Vec<u8>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        max_iterations: u64,
        /// Initial amplitude bit-width (≥ 2).
        #[arg(long, default_value_t = 2)]
        r_init: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Include the final-state amplitude dump (small programs only).
        #[arg(long)]
        dump_state: bool,
        /// Include wall-clock timing in the output (off by default so equal
        /// seeds print identical bytes).
        #[arg(long)]
        timings: bool,
    },
    /// Reachability: run a preset outcome pattern, optionally constraining
    /// chosen qubits to basis values, and report the exact probability.
    Reach {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        preset: Vec<u8>,
        /// Basis constraints like `q[3]=1,q[4]=0` (or flat indices `3=1`).
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Emit a benchmark program.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Timing suites over the benchmark families.
    Bench {
        #[command(subcommand)]
        suite: BenchSuite,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Two-qubit repeat-until-success X gate.
    #[command(alias = "rus_x")]
    RusX {
        /// Terminate the loop when the ancilla reads this value.
        #[arg(long, default_value_t = 1)]
        success_bit: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a parameter manifest next to the program.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Quantum walk with a flag qubit as loop guard.
    Qrw {
        #[arg(long, default_value_t = 8)]
        l: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Search iterations with a flag qubit as loop guard.
    Grover {
        #[arg(long, default_value_t = 4)]
        data_qubits: u32,
        #[arg(long, default_value_t = 0)]
        marked: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Seeded random while-loop program.
    #[command(alias = "random_while")]
    RandomWhile {
        #[arg(long, default_value_t = 100)]
        qubits: u32,
        #[arg(long, default_value_t = 50)]
        gates: u32,
        #[arg(long, default_value_t = 5)]
        mid_measures: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BenchSuite {
    /// Walk scale timing: one preset run of `iterations` rounds.
    Qrw {
        #[arg(long, default_value_t = 62)]
        l: u32,
        #[arg(long, default_value_t = 10)]
        iterations: u32,
    },
    /// Path-probability sweep over the retry loop.
    Rus {
        #[arg(long, default_value_t = 20)]
        max_k: u32,
    },
    /// Seeded sample-mode ensemble; reports median and quartiles.
    #[command(alias = "random_while")]
    RandomWhile {
        #[arg(long, default_value_t = 100)]
        qubits: u32,
        #[arg(long, default_value_t = 50)]
        gates: u32,
        #[arg(long, default_value_t = 5)]
        mid_measures: u32,
        #[arg(long, default_value_t = 10)]
        runs: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, mode, preset, seed, max_iterations, r_init, format, dump_state, timings } => {
            let ir = match load_program(&file) {
                Ok(ir) => ir,
                Err(code) => return code,
            };
            let cfg = RunConfig {
                mode: match mode {
                    ModeArg::Sample => Mode::Sample,
                    ModeArg::Preset => Mode::Preset,
                },
                preset: preset.iter().map(|&b| b != 0).collect(),
                seed: seed.unwrap_or_else(entropy_seed),
                max_iterations,
                r_init,
                ..Default::default()
            };
            if cfg.mode == Mode::Preset && cfg.preset.is_empty() {
                return runtime_error("preset mode needs --preset");
            }
            let started = Instant::now();
            let result = match exec::run(&ir, &cfg) {
                Ok(r) => r,
                Err(e) => return runtime_error(&e.to_string()),
            };
            let elapsed = started.elapsed();
            let mut out = result_json(&ir, &result, dump_state, cfg.extract_limit);
            if timings {
                out["elapsed_seconds"] = json!(elapsed.as_secs_f64());
            }
            match format {
                FormatArg::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                FormatArg::Text => print_run_text(&ir, &result),
            }
            ExitCode::SUCCESS
        }
        Command::Reach { file, preset, target, format } => {
            let ir = match load_program(&file) {
                Ok(ir) => ir,
                Err(code) => return code,
            };
            let pattern: Vec<bool> = preset.iter().map(|&b| b != 0).collect();
            let constraints = match target.as_deref().map(|t| parse_target(t, &ir)).transpose() {
                Ok(c) => c,
                Err(msg) => return runtime_error(&msg),
            };
            let result = match exec::reach_query(&ir, &pattern, constraints.as_deref()) {
                Ok(r) => r,
                Err(e) => return runtime_error(&e.to_string()),
            };
            let out = reach_json(&result);
            match format {
                FormatArg::Json => println!("{}", serde_json::to_string_pretty(&out).unwrap()),
                FormatArg::Text => {
                    println!(
                        "reachable: {}  probability: {} ({})",
                        result.reachable,
                        result.probability,
                        format_float(result.probability.to_f64())
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Command::Gen { family } => {
            let (spec, output, manifest) = match family {
                GenFamily::RusX { success_bit, output, manifest } => {
                    (BenchSpec::RusX { success_on_one: success_bit != 0 }, output, manifest)
                }
                GenFamily::Qrw { l, output, manifest } => (BenchSpec::Qrw { position_qubits: l }, output, manifest),
                GenFamily::Grover { data_qubits, marked, output, manifest } => {
                    (BenchSpec::Grover { data_qubits, marked }, output, manifest)
                }
                GenFamily::RandomWhile { qubits, gates, mid_measures, seed, output, manifest } => {
                    (BenchSpec::RandomWhile { qubits, gates, mid_measures, seed }, output, manifest)
                }
            };
            if let Err(msg) = spec.validate() {
                return runtime_error(&msg);
            }
            let text = spec.generate();
            if let Some(path) = output {
                if let Err(e) = std::fs::write(&path, &text) {
                    return runtime_error(&format!("cannot write {}: {e}", path.display()));
                }
            } else {
                print!("{text}");
            }
            if let Some(path) = manifest {
                let m = serde_json::to_string_pretty(&spec.manifest()).unwrap();
                if let Err(e) = std::fs::write(&path, m) {
                    return runtime_error(&format!("cannot write {}: {e}", path.display()));
                }
            }
            ExitCode::SUCCESS
        }
        Command::Bench { suite } => bench(suite),
    }
}

fn entropy_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
}

fn load_program(path: &PathBuf) -> Result<ProgramIR, ExitCode> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}", json!({"error": format!("cannot read {}: {e}", path.display())}));
            return Err(ExitCode::from(2));
        }
    };
    match qasm::parse_and_analyze(&text) {
        Ok(ir) => Ok(ir),
        Err(diags) => {
            eprintln!("{}", serde_json::to_string_pretty(&diags).unwrap());
            Err(ExitCode::from(1))
        }
    }
}

fn runtime_error(msg: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": msg }));
    ExitCode::from(2)
}

fn print_run_text(ir: &ProgramIR, r: &RunResult) {
    println!("status: {}", status_str(r.status));
    println!("p_global: {} ({})", r.p_global, format_float(r.p_global.to_f64()));
    println!("iterations: {}", r.total_iterations);
    for reg in &ir.bit_regs {
        let vals: Vec<String> = (0..reg.size)
            .map(|i| match r.store.read(reg.base + i) {
                Some(v) => (v as u8).to_string(),
                None => "-".into(),
            })
            .collect();
        println!("bits {}: [{}]", reg.name, vals.join(", "));
    }
    for d in &r.deferred {
        println!(
            "deferred {} -> {}: p0 = {} ({}), p1 = {} ({})",
            ir.qubit_name(d.qubit),
            ir.bit_name(d.bit),
            d.p0,
            format_float(d.p0.to_f64()),
            d.p1,
            format_float(d.p1.to_f64())
        );
    }
}

/// Parse `q[3]=1,q[4]=0` (register syntax) or `3=1` (flat indices).
fn parse_target(text: &str, ir: &ProgramIR) -> Result<Vec<(u32, bool)>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let (lhs, rhs) = part.split_once('=').ok_or_else(|| format!("bad target `{part}` (expected q=V)"))?;
        let value = match rhs.trim() {
            "0" => false,
            "1" => true,
            other => return Err(format!("bad target value `{other}`")),
        };
        let lhs = lhs.trim();
        let qubit = if let Ok(flat) = lhs.parse::<u32>() {
            flat
        } else if let Some((name, idx)) = lhs.split_once('[') {
            let idx: u32 = idx
                .strip_suffix(']')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| format!("bad target qubit `{lhs}`"))?;
            let reg = ir
                .qubit_regs
                .iter()
                .find(|r| r.name == name)
                .ok_or_else(|| format!("unknown register `{name}`"))?;
            if idx >= reg.size {
                return Err(format!("index {idx} out of range for `{name}`"));
            }
            reg.base + idx
        } else if let Some(reg) = ir.qubit_regs.iter().find(|r| r.name == lhs) {
            reg.base
        } else if let Some(flat) = lhs.strip_prefix('q').and_then(|s| s.parse::<u32>().ok()) {
            flat
        } else {
            return Err(format!("bad target qubit `{lhs}`"));
        };
        if qubit >= ir.num_qubits {
            return Err(format!("qubit {qubit} out of range"));
        }
        out.push((qubit, value));
    }
    Ok(out)
}

fn bench(suite: BenchSuite) -> ExitCode {
    match suite {
        BenchSuite::Qrw { l, iterations } => {
            let started = Instant::now();
            let mut pattern = vec![0u8; iterations as usize];
            *pattern.last_mut().unwrap() = 1;
            let p = sqcsim_core::bench::qrw_reach_probability(l, iterations);
            let elapsed = started.elapsed().as_secs_f64();
            println!("qrw l={l} qubits={} iterations={iterations} p={} time={elapsed:.3}s", l + 2, p.to_f64());
        }
        BenchSuite::Rus { max_k } => {
            let ir = qasm::parse_and_analyze(&sqcsim_core::bench::gen_rus_x(true)).expect("generator output is clean");
            println!("{:>4} {:>14} {:>10}", "k", "p_path", "time(s)");
            for k in 1..=max_k {
                let mut pattern = vec![false; k as usize - 1];
                pattern.push(true);
                let started = Instant::now();
                let res = exec::run(&ir, &RunConfig::preset(&pattern)).expect("preset run");
                let elapsed = started.elapsed().as_secs_f64();
                println!("{k:>4} {:>14.10} {elapsed:>10.5}", res.p_global.to_f64());
            }
        }
        BenchSuite::RandomWhile { qubits, gates, mid_measures, runs, workers } => {
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1));
            let mut times: Vec<f64> = Vec::with_capacity(runs as usize);
            let next = std::sync::atomic::AtomicU64::new(0);
            let results = std::sync::Mutex::new(Vec::new());
            std::thread::scope(|scope| {
                for _ in 0..workers.min(runs as usize).max(1) {
                    scope.spawn(|| loop {
                        let seed = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                        if seed >= runs {
                            break;
                        }
                        let text = sqcsim_core::bench::gen_random_while(qubits, gates, mid_measures, seed);
                        let ir = qasm::parse_and_analyze(&text).expect("generator output is clean");
                        let started = Instant::now();
                        let res = exec::run(&ir, &RunConfig::sample(seed)).expect("sample run");
                        let elapsed = started.elapsed().as_secs_f64();
                        results.lock().unwrap().push((seed, elapsed, res.total_iterations));
                    });
                }
            });
            let mut rows = results.into_inner().unwrap();
            rows.sort_by_key(|r| r.0);
            for (seed, t, iters) in &rows {
                println!("seed={seed} iterations={iters} time={t:.3}s");
                times.push(*t);
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q = |f: f64| times[((times.len() - 1) as f64 * f) as usize];
            println!(
                "rqc_q{qubits}_g{gates}_m{mid_measures}: median={:.3}s iqr=[{:.3}, {:.3}]",
                q(0.5),
                q(0.25),
                q(0.75)
            );
        }
    }
    ExitCode::SUCCESS
}
