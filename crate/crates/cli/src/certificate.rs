//! Canonical JSON certificates.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("spinlab ", env!("CARGO_PKG_VERSION"));

/// One certificate: what was asked, a digest of the inputs, and the answer.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub command: String,
    pub inputs_digest: String,
    pub verdict: bool,
    pub results: Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Certificate {
    /// # Panics
    /// If `results` contains a floating-point number.
    pub fn new(command: impl Into<String>, inputs: &[u8], verdict: bool, results: Value) -> Self {
        assert!(float_free(&results), "certificates carry no floats");
        Certificate {
            command: command.into(),
            inputs_digest: format!("sha256:{}", sha256_hex(inputs)),
            verdict,
            results,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs_digest".into(), Value::String(self.inputs_digest.clone()));
        m.insert("verdict".into(), Value::Bool(self.verdict));
        m.insert("results".into(), self.results.clone());
        m.insert("tool_version".into(), Value::String(TOOL_VERSION.into()));
        Value::Object(m)
    }
}

fn float_free(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(a) => a.iter().all(float_free),
        Value::Object(m) => m.values().all(float_free),
        _ => true,
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            Value::Object(keys.into_iter().map(|k| (k.clone(), sort_keys(&m[k]))).collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

fn without_version(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.iter()
                .filter(|(k, _)| k.as_str() != "tool_version")
                .map(|(k, v)| (k.clone(), without_version(v)))
                .collect(),
        ),
        Value::Array(a) => Value::Array(a.iter().map(without_version).collect()),
        other => other.clone(),
    }
}

/// First place where `got` and `expected` differ, ignoring `tool_version`.
pub fn golden_mismatch(got: &Value, expected: &Value) -> Option<String> {
    first_difference(&without_version(got), &without_version(expected), "$")
}

fn first_difference(a: &Value, b: &Value, path: &str) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                (Some(p), Some(q)) => first_difference(p, q, &format!("{path}.{k}")),
                (Some(_), None) => Some(format!("{path}.{k}: unexpected key")),
                _ => Some(format!("{path}.{k}: missing")),
            })
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Some(format!("{path}: length {} vs expected {}", x.len(), y.len()));
            }
            x.iter()
                .zip(y)
                .enumerate()
                .find_map(|(i, (p, q))| first_difference(p, q, &format!("{path}[{i}]")))
        }
        _ if a == b => None,
        _ => Some(format!("{path}: {a} vs expected {b}")),
    }
}
