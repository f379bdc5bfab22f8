//! Run records and their CSV form.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

/// One `(metric, n, value, stderr, mode)` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub metric: String,
    pub n: Option<usize>,
    pub value: f64,
    pub stderr: Option<f64>,
    /// `rational`, `float` or `mc`.
    pub mode: String,
}

impl Row {
    pub fn new(metric: impl Into<String>, n: Option<usize>, value: f64, mode: &str) -> Self {
        Row { metric: metric.into(), n, value, stderr: None, mode: mode.into() }
    }

    pub fn with_stderr(mut self, se: f64) -> Self {
        self.stderr = Some(se);
        self
    }
}

/// Everything a run computes. Identical configs give identical payloads.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Payload {
    pub rows: Vec<Row>,
    /// Full profiles, reports and witness elements in element syntax.
    pub details: serde_json::Value,
    /// Invariant violations found by the run; nonzero means exit status 1.
    pub violations: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub payload: Payload,
}

fn number(x: f64) -> String {
    // Debug for f64 is the shortest round-trip form, switching to an exponent
    // for very small and very large magnitudes
    format!("{x:?}")
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["metric", "n", "value", "stderr", "mode"]).map_err(io)?;
    for r in rows {
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        let se = r.stderr.map(number).unwrap_or_default();
        w.write_record([r.metric.as_str(), &n, &number(r.value), &se, &r.mode]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
