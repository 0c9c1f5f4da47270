//! JSON report envelope shared by every CLI command.

use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: Vec<String>,
    pub map_digest: Option<String>,
    pub params: Value,
    pub result: Value,
    pub verdict: String,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(
        command: Vec<String>,
        map_digest: Option<String>,
        params: impl Serialize,
        result: impl Serialize,
        verdict: &str,
    ) -> Self {
        Report {
            version: VERSION,
            command,
            map_digest,
            params: serde_json::to_value(params).expect("params serialize"),
            result: serde_json::to_value(result).expect("result serialize"),
            verdict: verdict.to_string(),
            timing_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report with `timing_ms` removed: equal for identical inputs.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    }
}

/// Drops `timing_ms` from a report read back from text.
pub fn strip_timing(report_json: &str) -> serde_json::Result<String> {
    let mut v: Value = serde_json::from_str(report_json)?;
    if let Some(o) = v.as_object_mut() {
        o.remove("timing_ms");
    }
    serde_json::to_string(&v)
}
