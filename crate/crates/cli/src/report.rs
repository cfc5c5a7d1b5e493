//! Machine-readable run reports.
//!
//! Every command emits one JSON document of the shape
//! `{ "command", "params", "results", "assertions": [{name, pass, value, tolerance}] }`.
//! Maps are ordered, nothing depends on wall-clock state, and floats go
//! through the standard shortest-round-trip formatting, so identical
//! configurations produce byte-identical output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// One named check with its observed value and tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    /// What was checked.
    pub name: String,
    /// Whether it held.
    pub pass: bool,
    /// Observed value (deviation, index value, ...).
    pub value: f64,
    /// Tolerance the value was held against.
    pub tolerance: f64,
}

/// Full report of one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Subcommand name.
    pub command: String,
    /// Echo of the effective parameters.
    pub params: BTreeMap<String, Value>,
    /// Named scalar/array results.
    pub results: BTreeMap<String, Value>,
    /// Checks performed during the run.
    pub assertions: Vec<Assertion>,
}

impl Report {
    /// Start a report for a command.
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            results: BTreeMap::new(),
            assertions: Vec::new(),
        }
    }

    /// Record an input parameter.
    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Record a result.
    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    /// Record a serializable result.
    pub fn result_json<T: Serialize>(&mut self, key: &str, value: &T) -> &mut Self {
        self.results.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable result"),
        );
        self
    }

    /// Record a |value − target| ≤ tolerance check.
    pub fn assert_close(&mut self, name: &str, value: f64, target: f64, tolerance: f64) -> &mut Self {
        let dev = (value - target).abs();
        self.assertions.push(Assertion {
            name: name.to_string(),
            pass: dev <= tolerance,
            value,
            tolerance,
        });
        self
    }

    /// Record a boolean check carrying a diagnostic value.
    pub fn assert_true(&mut self, name: &str, pass: bool, value: f64, tolerance: f64) -> &mut Self {
        self.assertions.push(Assertion {
            name: name.to_string(),
            pass,
            value,
            tolerance,
        });
        self
    }

    /// Whether every assertion held.
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    /// Serialize to pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Write to a file or stdout.
    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        let body = self.to_json();
        match out {
            Some(path) => std::fs::write(path, body + "\n"),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                writeln!(lock, "{body}")
            }
        }
    }
}

/// Format a float with 17 significant digits for CSV columns.
pub fn csv_num(v: f64) -> String {
    format!("{v:.16e}")
}
