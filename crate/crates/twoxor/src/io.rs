//! Output records: one JSON schema for every command, plus flat CSV.
//!
//! Rationals travel as `"p/q"` strings next to an `f64` rendering; serde_json
//! prints the shortest representation that round-trips, so a 17-digit
//! reparse gives the identical float. There is no timestamp, so repeated
//! runs are byte-identical.

use serde::Serialize;
use serde_json::{json, Map, Value};
use twoxor_core::asymptotics::LogValue;
use twoxor_core::census::ClassProbability;
use twoxor_core::rational::{to_f64, to_string};
use twoxor_core::BigRational;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Asymptotic,
    Montecarlo,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub method: Method,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub provenance: Provenance,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Map<String, Value>, results: Value, method: Method, seed: Option<u64>) -> Self {
        OutputRecord { command: command.to_string(), inputs, results, provenance: Provenance { method, version: VERSION, seed } }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }
}

/// `{"exact": "p/q", "float": x}`.
pub fn rational(x: &BigRational) -> Value {
    json!({ "exact": to_string(x), "float": to_f64(x) })
}

/// `{"ln": …, "log2": …, "log_scale": true}` plus the linear value when it
/// is representable.
pub fn log_value(v: LogValue) -> Value {
    let mut m = Map::new();
    m.insert("ln".into(), json!(v.ln));
    m.insert("log2".into(), json!(v.log2()));
    m.insert("negative".into(), json!(v.negative));
    m.insert("log_scale".into(), json!(true));
    let lin = v.value();
    if lin.is_finite() && lin != 0.0 {
        m.insert("float".into(), json!(lin));
    }
    Value::Object(m)
}

pub fn class_probability(c: &ClassProbability) -> Value {
    json!({
        "partition": c.partition.to_string(),
        "class_size": c.class_size.to_string(),
        "count": rational(&c.count_per_function),
        "prob_function": rational(&c.prob_per_function),
        "prob_class": rational(&c.prob_class),
    })
}

/// Writes `header` and `rows` as CSV.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Float rendering used in CSV cells (shortest round-trip form).
pub fn float_cell(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}
