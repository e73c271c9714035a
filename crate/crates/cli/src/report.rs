use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::input::InputDigest;

#[derive(Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
}

impl Header {
    pub fn new(command: &'static str, config: Value, inputs: Vec<InputDigest>) -> Self {
        Header { tool: "boolsp", version: env!("CARGO_PKG_VERSION"), command, config, inputs }
    }
}

/// The body's fields with `header` added alongside. Maps are ordered by key,
/// so the same configuration always yields the same bytes.
pub fn assemble(header: &Header, body: Value) -> Result<Value> {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("header".into(), serde_json::to_value(header)?);
    Ok(Value::Object(map))
}

pub fn to_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("values always serialize");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_rational(m: &Map<String, Value>) -> bool {
    m.len() == 3 && m.contains_key("num") && m.contains_key("den") && m.contains_key("approx")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if is_rational(m) => {
            let r = format!("{}/{} ≈ {}", scalar(&m["num"]), scalar(&m["den"]), scalar(&m["approx"]));
            out.push((prefix.into(), r));
        }
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            let joined = if items.len() > 16 {
                format!("{} ... ({} entries)", items[..16].join(" "), items.len())
            } else {
                items.join(" ")
            };
            out.push((prefix.into(), joined));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.into(), scalar(other))),
    }
}

/// Two-column `key  value` table, preceded by any summary lines.
pub fn to_text(report: &Value, summary: &[String]) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for line in summary {
        let _ = writeln!(s, "{line}");
    }
    if !summary.is_empty() {
        s.push('\n');
    }
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

pub fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
