//! Plain-text rendering of reports.

use std::fmt::Write;

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `path = value` lines for every leaf.
fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            writeln!(out, "{prefix} = [{}]", joined.join(", ")).unwrap();
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        leaf => writeln!(out, "{prefix} = {}", scalar(leaf)).unwrap(),
    }
}

fn params(v: &Value) -> String {
    v.as_object()
        .map(|m| m.iter().map(|(k, x)| format!("{k}={}", scalar(x))).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn check_line(c: &Value, out: &mut String) {
    let status = if c["status"] == "pass" { "PASS" } else { "FAIL" };
    write!(out, "{status} {} {}", scalar(&c["check"]), params(&c["params"])).unwrap();
    if let Some(r) = c.get("residual_norm") {
        write!(out, " residual={}", scalar(r)).unwrap();
    }
    if let Some(w) = c.get("witness") {
        write!(out, " witness: {}", scalar(w)).unwrap();
    }
    out.push('\n');
}

pub fn render(command: &str, report: &Value, passed: bool) -> String {
    let mut out = String::new();
    match command {
        "verify" => {
            for c in report["checks"].as_array().into_iter().flatten() {
                check_line(c, &mut out);
            }
            let sum = &report["summary"];
            writeln!(out, "{} checks, {} failed", sum["total"], sum["failed"]).unwrap();
        }
        "classify" => {
            writeln!(out, "spin {}", scalar(&report["spin"])).unwrap();
            let cubic = &report["n1_cubic"];
            for (d, c) in cubic["coefficients"].as_array().into_iter().flatten().enumerate() {
                writeln!(out, "n=1 cubic: coefficient of g^{} = {}", d + 1, scalar(c)).unwrap();
            }
            for r in cubic["roots"].as_array().into_iter().flatten() {
                writeln!(out, "n=1 root: {}", scalar(r)).unwrap();
            }
            for c in report["steps"].as_array().into_iter().flatten() {
                check_line(c, &mut out);
            }
            for p in report["per_n"].as_array().into_iter().flatten() {
                let forced: Vec<String> = p["forced_g_values"].as_array().into_iter().flatten().map(scalar).collect();
                writeln!(out, "n={} base={} forced g = {{{}}}", p["n"], scalar(&p["base"]), forced.join(", ")).unwrap();
                for c in p["details"].as_array().into_iter().flatten() {
                    out.push_str("  ");
                    check_line(c, &mut out);
                }
            }
            for b in report["branches"].as_array().into_iter().flatten() {
                writeln!(out, "branch {} (r_1 = {}): {}", scalar(&b["verdict"]), scalar(&b["r1"]), scalar(&b["conclusion"]))
                    .unwrap();
            }
        }
        "enumerate" => {
            writeln!(out, "spin {} q={} seed={} attempts={} failures={}", scalar(&report["spin"]), scalar(&report["q"]), report["seed"], report["attempts"], report["failures"]).unwrap();
            for s in report["solutions"].as_array().into_iter().flatten() {
                let r: Vec<String> = s["r"].as_array().into_iter().flatten().map(scalar).collect();
                writeln!(out, "{} r = ({}) residual={} hits={}", scalar(&s["verdict"]), r.join(", "), scalar(&s["residual"]), s["hits"]).unwrap();
            }
        }
        _ => flatten("", report, &mut out),
    }
    writeln!(out, "status: {}", if passed { "pass" } else { "fail" }).unwrap();
    out
}
