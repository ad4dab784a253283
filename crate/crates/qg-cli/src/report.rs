use std::fmt::Write as _;
use std::path::Path;

use qg_core::acceptance::Check;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        InputDigest { path: path.display().to_string(), sha256: format!("{:x}", Sha256::digest(bytes)) }
    }
}

/// The outcome of one command: everything except `wall_time_s` is a function of the inputs and seed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    /// Computed quantities, in insertion order.
    pub outputs: serde_json::Map<String, Value>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, tolerance: f64) -> Self {
        RunReport {
            command,
            inputs: Vec::new(),
            seed,
            tolerance,
            checks: Vec::new(),
            outputs: serde_json::Map::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.checks.push(Check::new(name, value, threshold));
    }

    pub fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check::holds(name, ok));
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) {
        self.outputs.insert(key.to_string(), serde_json::to_value(value).expect("outputs serialize"));
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    /// The human-readable form printed on standard output.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        for input in &self.inputs {
            let _ = writeln!(out, "input: {} sha256={}", input.path, input.sha256);
        }
        let _ = writeln!(out, "seed: {}  tolerance: {:e}", self.seed, self.tolerance);
        for (key, value) in &self.outputs {
            let _ = writeln!(out, "{key}: {}", compact(value));
        }
        for check in &self.checks {
            let status = if check.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "[{status}] {} = {:.3e} (threshold {:.1e})", check.name, check.value, check.threshold);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let verdict = if failed == 0 { "PASS".to_string() } else { format!("FAIL ({failed} of {})", self.checks.len()) };
        let _ = writeln!(out, "result: {verdict} in {:.2}s", self.wall_time_s);
        out
    }
}

fn compact(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
