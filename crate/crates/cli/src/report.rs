//! Run reports: one `key=value` line by default, a JSON document with `--json`.

use std::collections::BTreeMap;

use charshift::Complex64;
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::Value;

/// Bumped whenever a field of [`RunReport`] changes meaning or shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: &'static str,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<usize>>,
    pub results: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub complex: BTreeMap<String, Vec<Box<RawValue>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Value>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, mode: &str) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            version: charshift::VERSION,
            command: command.to_string(),
            params: BTreeMap::new(),
            seed,
            mode: mode.to_string(),
            solution: None,
            results: BTreeMap::new(),
            complex: BTreeMap::new(),
            checks: Vec::new(),
            verified: false,
            wall_time_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn complex_series(&mut self, key: &str, values: &[Complex64]) -> &mut Self {
        self.complex
            .insert(key.to_string(), values.iter().map(|&c| complex_json(c)).collect());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `command k=v ...` with parameters, solution, results and status.
    pub fn to_line(&self) -> String {
        let mut parts = vec![self.command.clone()];
        for (k, v) in &self.params {
            parts.push(format!("{k}={}", compact(v)));
        }
        parts.push(format!("seed={}", self.seed));
        parts.push(format!("mode={}", self.mode));
        if let Some(sol) = &self.solution {
            let items: Vec<String> = sol.iter().map(usize::to_string).collect();
            parts.push(format!("solution=[{}]", items.join(",")));
        }
        for (k, v) in &self.results {
            parts.push(format!("{k}={}", compact(v)));
        }
        parts.push(format!("verified={}", self.verified));
        if let Some(ms) = self.wall_time_ms {
            parts.push(format!("wall_time_ms={ms:.3}"));
        }
        parts.join(" ")
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `[re, im]` with 17 significant digits each.
pub fn complex_json(c: Complex64) -> Box<RawValue> {
    RawValue::from_string(format!("[{:.16e}, {:.16e}]", c.re, c.im)).expect("valid JSON array")
}

pub fn format_complex(c: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", c.re, c.im)
}
