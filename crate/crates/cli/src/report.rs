//! JSON rendering helpers. Every number is emitted as an object holding an
//! exact string and a float rendering.

use std::time::Duration;

use arc_cover::num::{format_rational, rational_to_f64};
use arc_cover::{Pattern, Rational, Scalar};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_ID: &str = "arc-cover-report/1";

pub fn rational(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "float": finite(rational_to_f64(r)) })
}

/// Exact values render as `p/q`; floats as their shortest decimal form.
pub fn scalar<S: Scalar>(x: &S) -> Value {
    if S::EXACT {
        rational(&x.to_rational())
    } else {
        let f = x.to_f64();
        json!({ "exact": format!("{f}"), "float": finite(f) })
    }
}

pub fn integer(n: usize) -> Value {
    json!({ "exact": n.to_string(), "float": n as f64 })
}

pub fn float(f: f64) -> Value {
    json!({ "exact": format!("{f}"), "float": finite(f) })
}

fn finite(f: f64) -> Value {
    if f.is_finite() {
        json!(f)
    } else {
        Value::Null
    }
}

pub fn pattern(p: &Pattern) -> Value {
    json!({ "vertices": p.vertex_count(), "arcs": p.arcs() })
}

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One input the report was computed from.
#[derive(Debug, Clone)]
pub struct InputRecord {
    pub role: &'static str,
    pub source: String,
    pub sha256: Option<String>,
}

impl InputRecord {
    pub fn to_json(&self) -> Value {
        json!({ "role": self.role, "source": self.source, "sha256": self.sha256 })
    }
}

pub struct RunReport {
    pub command: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub exact: bool,
    pub inputs: Vec<InputRecord>,
    pub result: Value,
    pub status: &'static str,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("schema".into(), json!(SCHEMA_ID));
        top.insert("command".into(), json!(self.command));
        top.insert("args".into(), json!(self.args));
        top.insert("seed".into(), json!(self.seed));
        top.insert("arithmetic".into(), json!(if self.exact { "exact" } else { "float" }));
        top.insert("inputs".into(), Value::Array(self.inputs.iter().map(InputRecord::to_json).collect()));
        top.insert("status".into(), json!(self.status));
        top.insert("result".into(), self.result.clone());
        top.insert("timing".into(), json!({ "elapsed_ms": self.elapsed.as_secs_f64() * 1000.0 }));
        Value::Object(top)
    }
}
