//! End-to-end tests of the installed binary: exit codes, JSON shapes, and
//! byte-level determinism.

use serde_json::Value;
use std::process::{Command, Output};

fn sqcsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqcsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("sqcsim-test-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn gen(args: &[&str]) -> String {
    let out = sqcsim(args);
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn run_rus_preset_reports_half() {
    let path = write_temp("rus.qasm", &gen(&["gen", "rus-x"]));
    let out = sqcsim(&["run", path.to_str().unwrap(), "--mode", "preset", "--preset", "1"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["p_global"]["float"], 0.5);
    assert_eq!(v["p_global"]["rational"], "1/2");
    validate_result_schema(&v);
}

#[test]
fn reach_qrw_pattern() {
    let path = write_temp("qrw8.qasm", &gen(&["gen", "qrw", "--l", "8"]));
    let out = sqcsim(&["reach", path.to_str().unwrap(), "--preset", "0,0,1"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reachable"], true);
    assert_eq!(v["probability"]["float"], 0.125);
    assert_eq!(v["probability"]["rational"], "1/8");
}

#[test]
fn reach_with_target_constraint() {
    let path = write_temp("rus-target.qasm", &gen(&["gen", "rus-x"]));
    let out = sqcsim(&["reach", path.to_str().unwrap(), "--preset", "1", "--target", "q[1]=1"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reachable"], true);
    assert_eq!(v["probability"]["rational"], "1/2");
    // impossible constraint on the same path
    let out = sqcsim(&["reach", path.to_str().unwrap(), "--preset", "1", "--target", "q[1]=0"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reachable"], false);
    assert_eq!(v["probability"]["float"], 0.0);
}

#[test]
fn text_format_output() {
    let path = write_temp("rus-text.qasm", &gen(&["gen", "rus-x"]));
    let out = sqcsim(&["run", path.to_str().unwrap(), "--mode", "preset", "--preset", "1", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p_global: 1/2 (0.5)"));
    assert!(text.contains("status: ok"));
}

#[test]
fn sample_mode_output_is_byte_identical_per_seed() {
    let path = write_temp("rus-det.qasm", &gen(&["gen", "rus-x"]));
    let args = ["run", path.to_str().unwrap(), "--mode", "sample", "--seed", "1"];
    let a = sqcsim(&args);
    let b = sqcsim(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_1_with_json_diagnostics() {
    let path = write_temp("bad.qasm", "qubit[1] q;\nrx(0.5) q[0];\n");
    let out = sqcsim(&["run", path.to_str().unwrap(), "--mode", "preset", "--preset", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v[0]["code"], "unsupported-gate");
    assert!(v[0]["line"].is_u64());
}

#[test]
fn runtime_errors_exit_2() {
    let path = write_temp("rus-short.qasm", &gen(&["gen", "rus-x"]));
    // the all-zero prefix runs out while the loop still needs outcomes
    let out = sqcsim(&["run", path.to_str().unwrap(), "--mode", "preset", "--preset", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(v["error"].as_str().unwrap().contains("preset"));
}

#[test]
fn flagged_statuses_still_exit_0() {
    let path = write_temp("measure-x.qasm", "qubit[1] q;\nbit c;\nc = measure q[0];\nx q[0];\n");
    let out = sqcsim(&["run", path.to_str().unwrap(), "--mode", "preset", "--preset", "1"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "unreachable");
    assert_eq!(v["p_global"]["float"], 0.0);
}

#[test]
fn dump_state_includes_amplitudes() {
    let path = write_temp("bell.qasm", "qubit[2] q;\nh q[0];\ncx q[0], q[1];\n");
    let out = sqcsim(&["run", path.to_str().unwrap(), "--mode", "preset", "--dump-state", "--preset", "0"]);
    // no measurements: preset list is never consumed
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let amps = v["state"]["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 2);
    assert_eq!(v["state"]["k"], 1);
    validate_result_schema(&v);
}

#[test]
fn generated_manifest_is_json() {
    let dir = std::env::temp_dir();
    let qasm = dir.join(format!("sqcsim-gen-{}.qasm", std::process::id()));
    let manifest = dir.join(format!("sqcsim-gen-{}.json", std::process::id()));
    let out = sqcsim(&[
        "gen",
        "random-while",
        "--qubits",
        "8",
        "--gates",
        "12",
        "--mid-measures",
        "2",
        "--seed",
        "5",
        "-o",
        qasm.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["family"], "random_while");
    assert_eq!(m["qubits"], 8);
    assert!(std::fs::read_to_string(&qasm).unwrap().contains("while"));
}

// ---------------------------------------------------------------------------
// Minimal structural validation against the shipped schema. Covers the
// subset of draft-07 the schema uses: type, required, properties, items,
// enum, $ref into definitions, and the two patterns that appear there.
// ---------------------------------------------------------------------------

fn validate_result_schema(instance: &Value) {
    let schema_text = include_str!("../../../docs/result.schema.json");
    let schema: Value = serde_json::from_str(schema_text).unwrap();
    let mut errors = Vec::new();
    check(&schema, instance, &schema, "$", &mut errors);
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

fn check(schema: &Value, instance: &Value, root: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = if let Some(r) = schema["$ref"].as_str() {
        let key = r.trim_start_matches("#/definitions/");
        &root["definitions"][key]
    } else {
        schema
    };
    if let Some(allowed) = schema["enum"].as_array() {
        if !allowed.contains(instance) {
            errors.push(format!("{path}: {instance} not in {allowed:?}"));
        }
        return;
    }
    if let Some(ty) = schema["type"].as_str() {
        if !type_matches(ty, instance) {
            errors.push(format!("{path}: expected {ty}, got {instance}"));
            return;
        }
    } else if let Some(types) = schema["type"].as_array() {
        if !types.iter().any(|t| type_matches(t.as_str().unwrap(), instance)) {
            errors.push(format!("{path}: type mismatch"));
            return;
        }
    }
    if let Some(pattern) = schema["pattern"].as_str() {
        let s = instance.as_str().unwrap_or_default();
        let ok = match pattern {
            "^[01]+$" => !s.is_empty() && s.chars().all(|c| c == '0' || c == '1'),
            "^-?[0-9]+(/[0-9]+)?$" => {
                let s = s.strip_prefix('-').unwrap_or(s);
                match s.split_once('/') {
                    Some((n, d)) => is_digits(n) && is_digits(d),
                    None => is_digits(s),
                }
            }
            _ => true,
        };
        if !ok {
            errors.push(format!("{path}: {s:?} fails pattern {pattern}"));
        }
    }
    if let Some(obj) = instance.as_object() {
        if let Some(required) = schema["required"].as_array() {
            for key in required {
                if !obj.contains_key(key.as_str().unwrap()) {
                    errors.push(format!("{path}: missing required {key}"));
                }
            }
        }
        if let Some(props) = schema["properties"].as_object() {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    check(sub, v, root, &format!("{path}.{key}"), errors);
                }
            }
        }
        if let Some(extra) = schema.get("additionalProperties").filter(|v| v.is_object()) {
            let declared: Vec<&String> = schema["properties"].as_object().map(|p| p.keys().collect()).unwrap_or_default();
            for (key, v) in obj {
                if !declared.contains(&key) {
                    check(extra, v, root, &format!("{path}.{key}"), errors);
                }
            }
        }
    }
    if let Some(arr) = instance.as_array() {
        if let Some(items) = schema.get("items") {
            for (i, v) in arr.iter().enumerate() {
                check(items, v, root, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}
