//! Browser bindings for the simulator. Every entry point takes and returns
//! strings (program text and JSON documents), so the same functions are
//! callable from native tests and from the `www/index.html` page through
//! wasm-bindgen.

use sqcsim_core::bench::BenchSpec;
use sqcsim_core::exec::{self, Mode, RunConfig};
use sqcsim_core::qasm;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Run a program. `cfg_json` accepts
/// `{"mode": "preset"|"sample", "preset": [0,1,...], "seed": N,
///   "max_iterations": N}`; omitted fields use defaults. The result is the
/// same JSON document the command-line `run` prints, plus a state dump when
/// the program is small enough.
#[wasm_bindgen]
pub fn run_program(source: &str, cfg_json: &str) -> String {
    let ir = match qasm::parse_and_analyze(source) {
        Ok(ir) => ir,
        Err(diags) => return json!({ "diagnostics": diags }).to_string(),
    };
    let cfg = match parse_cfg(cfg_json) {
        Ok(cfg) => cfg,
        Err(msg) => return json!({ "error": msg }).to_string(),
    };
    match exec::run(&ir, &cfg) {
        Ok(result) => {
            let dump = ir.num_qubits <= 8;
            exec::result_json(&ir, &result, dump, cfg.extract_limit).to_string()
        }
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Exact reachability sweep for the quantum-walk family: probability that
/// the flag first fires at iteration k, for k = 1..=max_k.
#[wasm_bindgen]
pub fn qrw_reach_sweep(position_qubits: u32, max_k: u32) -> String {
    if !(2..=16).contains(&position_qubits) || !(1..=64).contains(&max_k) {
        return json!({ "error": "supported ranges: 2 ≤ position qubits ≤ 16, 1 ≤ max_k ≤ 64" }).to_string();
    }
    let rows: Vec<_> = (1..=max_k)
        .map(|k| {
            let p = sqcsim_core::bench::qrw_reach_probability(position_qubits, k);
            json!({
                "k": k,
                "probability": exec::prob_json(&p),
                "reachable": !p.is_zero(),
            })
        })
        .collect();
    json!({ "position_qubits": position_qubits, "rows": rows }).to_string()
}

/// Sample-mode ensemble: run the program `shots` times with consecutive
/// seeds and histogram the total loop iterations of each run.
#[wasm_bindgen]
pub fn sample_histogram(source: &str, shots: u32, seed0: u64, max_iterations: u64) -> String {
    let ir = match qasm::parse_and_analyze(source) {
        Ok(ir) => ir,
        Err(diags) => return json!({ "diagnostics": diags }).to_string(),
    };
    if shots == 0 || shots > 20_000 {
        return json!({ "error": "shots must be between 1 and 20000" }).to_string();
    }
    let mut histogram: std::collections::BTreeMap<u64, u32> = Default::default();
    let mut capped = 0u32;
    for i in 0..shots {
        let cfg = RunConfig { max_iterations, ..RunConfig::sample(seed0 + i as u64) };
        match exec::run(&ir, &cfg) {
            Ok(res) => {
                if res.status == exec::RunStatus::MaxIterations {
                    capped += 1;
                }
                *histogram.entry(res.total_iterations).or_insert(0) += 1;
            }
            Err(e) => return json!({ "error": e.to_string() }).to_string(),
        }
    }
    let rows: Vec<_> = histogram
        .iter()
        .map(|(iters, count)| json!({ "iterations": iters, "count": count }))
        .collect();
    json!({ "shots": shots, "capped": capped, "histogram": rows }).to_string()
}

/// Emit benchmark program text for the demo page's loaders. `params_json`
/// carries the family-specific knobs.
#[wasm_bindgen]
pub fn generate_benchmark(family: &str, params_json: &str) -> String {
    let params: serde_json::Value = serde_json::from_str(params_json).unwrap_or(json!({}));
    let get = |k: &str, d: u64| params[k].as_u64().unwrap_or(d);
    let spec = match family {
        "rus_x" => BenchSpec::RusX { success_on_one: get("success_bit", 1) != 0 },
        "qrw" => BenchSpec::Qrw { position_qubits: get("l", 4) as u32 },
        "grover" => BenchSpec::Grover { data_qubits: get("data_qubits", 3) as u32, marked: get("marked", 5) },
        "random_while" => BenchSpec::RandomWhile {
            qubits: get("qubits", 6) as u32,
            gates: get("gates", 18) as u32,
            mid_measures: get("mid_measures", 2) as u32,
            seed: get("seed", 1),
        },
        other => return json!({ "error": format!("unknown family `{other}`") }).to_string(),
    };
    match spec.validate() {
        Ok(()) => json!({ "source": spec.generate(), "manifest": spec.manifest() }).to_string(),
        Err(msg) => json!({ "error": msg }).to_string(),
    }
}

fn parse_cfg(cfg_json: &str) -> Result<RunConfig, String> {
    let v: serde_json::Value = if cfg_json.trim().is_empty() {
        json!({})
    } else {
        serde_json::from_str(cfg_json).map_err(|e| format!("bad config: {e}"))?
    };
    let mut cfg = RunConfig::default();
    match v["mode"].as_str() {
        Some("preset") => cfg.mode = Mode::Preset,
        Some("sample") | None => cfg.mode = Mode::Sample,
        Some(other) => return Err(format!("bad mode `{other}`")),
    }
    if let Some(arr) = v["preset"].as_array() {
        cfg.preset = arr.iter().map(|x| x.as_u64().unwrap_or(0) != 0).collect();
    }
    if let Some(seed) = v["seed"].as_u64() {
        cfg.seed = seed;
    }
    if let Some(mi) = v["max_iterations"].as_u64() {
        cfg.max_iterations = mi;
    }
    if cfg.mode == Mode::Preset && cfg.preset.is_empty() {
        return Err("preset mode needs a non-empty preset list".into());
    }
    Ok(cfg)
}
