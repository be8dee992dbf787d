//! Canonical pretty-printer; `parse ∘ pretty ∘ parse` is the identity on
//! span-stripped ASTs.

use super::ast::*;
use std::fmt::Write;

pub fn pretty(program: &Program) -> String {
    let mut out = String::new();
    if let Some(v) = &program.version {
        let _ = writeln!(out, "OPENQASM {v};");
    }
    for inc in &program.includes {
        let _ = writeln!(out, "include \"{inc}\";");
    }
    for s in &program.statements {
        write_stmt(&mut out, s, 0);
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_stmt(out: &mut String, s: &Stmt, depth: usize) {
    indent(out, depth);
    match s {
        Stmt::Decl { quantum, size, name, .. } => {
            let kw = if *quantum { "qubit" } else { "bit" };
            match size {
                Some(n) => {
                    let _ = writeln!(out, "{kw}[{n}] {name};");
                }
                None => {
                    let _ = writeln!(out, "{kw} {name};");
                }
            }
        }
        Stmt::Gate { ctrl_count, name, params, operands, .. } => {
            for _ in 0..*ctrl_count {
                out.push_str("ctrl @ ");
            }
            out.push_str(name);
            if !params.is_empty() {
                let _ = write!(out, "({})", params.join(", "));
            }
            out.push(' ');
            let ops: Vec<String> = operands.iter().map(operand).collect();
            let _ = writeln!(out, "{};", ops.join(", "));
        }
        Stmt::Measure { qubit, bit, arrow, .. } => {
            if *arrow {
                let _ = writeln!(out, "measure {} -> {};", operand(qubit), operand(bit));
            } else {
                let _ = writeln!(out, "{} = measure {};", operand(bit), operand(qubit));
            }
        }
        Stmt::Reset { qubit, .. } => {
            let _ = writeln!(out, "reset {};", operand(qubit));
        }
        Stmt::If { cond, then_body, else_body, .. } => {
            let _ = writeln!(out, "if ({}) {{", cond_str(cond));
            for s in then_body {
                write_stmt(out, s, depth + 1);
            }
            indent(out, depth);
            match else_body {
                Some(body) => {
                    out.push_str("} else {\n");
                    for s in body {
                        write_stmt(out, s, depth + 1);
                    }
                    indent(out, depth);
                    out.push_str("}\n");
                }
                None => out.push_str("}\n"),
            }
        }
        Stmt::Switch { scrutinee, cases, default, .. } => {
            let _ = writeln!(out, "switch ({}) {{", operand(scrutinee));
            for (values, body) in cases {
                indent(out, depth + 1);
                let labels: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "case {} {{", labels.join(", "));
                for s in body {
                    write_stmt(out, s, depth + 2);
                }
                indent(out, depth + 1);
                out.push_str("}\n");
            }
            if let Some(body) = default {
                indent(out, depth + 1);
                out.push_str("default {\n");
                for s in body {
                    write_stmt(out, s, depth + 2);
                }
                indent(out, depth + 1);
                out.push_str("}\n");
            }
            indent(out, depth);
            out.push_str("}\n");
        }
        Stmt::For { ty, var, lo, hi, body, .. } => {
            let _ = writeln!(out, "for {ty} {var} in [{}:{}] {{", bound(lo), bound(hi));
            for s in body {
                write_stmt(out, s, depth + 1);
            }
            indent(out, depth);
            out.push_str("}\n");
        }
        Stmt::While { cond, body, .. } => {
            let _ = writeln!(out, "while ({}) {{", cond_str(cond));
            for s in body {
                write_stmt(out, s, depth + 1);
            }
            indent(out, depth);
            out.push_str("}\n");
        }
    }
}

fn operand(o: &Operand) -> String {
    match o.index {
        Some(i) => format!("{}[{}]", o.name, i),
        None => o.name.clone(),
    }
}

fn cond_str(c: &Cond) -> String {
    let op = if c.equal { "==" } else { "!=" };
    format!("{} {} {}", operand(&c.lhs), op, c.rhs)
}

fn bound(b: &ForBound) -> String {
    match b {
        ForBound::Lit(v) => v.to_string(),
        ForBound::Name(s) => s.clone(),
    }
}
