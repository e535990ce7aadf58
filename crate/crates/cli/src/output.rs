//! Report serialization: JSON with every float at 17 significant digits and
//! sorted keys, and CSV tables with the same float format.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

use crate::config::{Format, JobConfig};
use crate::error::CliError;

pub const SCHEMA: &str = "spinorbasis/v1";

/// The only report field allowed to differ between identical runs.
pub const TIMESTAMP_FIELD: &str = "timestamp";

/// 17 significant digits in scientific notation; non-finite values become
/// the strings "nan", "inf", "-inf".
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.push_str(&" ".repeat(n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().expect("f64 number");
                out.push_str(&format_float(f));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, item, indent + 2);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Pretty JSON text (2-space indent, keys sorted, floats at 17 digits).
pub fn to_json_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

/// Serializes any value to a JSON tree, mapping errors to compute failures.
pub fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Compute(format!("serialization failed: {e}")))
}

fn timestamp() -> u64 {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return epoch;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Wraps a command payload with the schema tag, command name, seed,
/// merged parameters and timestamp.
pub fn envelope(cfg: &JobConfig, payload: Map<String, Value>) -> Value {
    let mut map = payload;
    map.insert("schema".into(), Value::from(SCHEMA));
    map.insert("command".into(), Value::from(cfg.command));
    map.insert("seed".into(), Value::from(cfg.seed));
    let params: Map<String, Value> =
        cfg.parameters().iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
    map.insert("parameters".into(), Value::Object(params));
    map.insert(TIMESTAMP_FIELD.into(), Value::from(timestamp()));
    Value::Object(map)
}

/// Removes the timestamp line from a JSON report so two runs can be compared
/// byte for byte.
pub fn strip_timestamp(report: &str) -> String {
    let key = format!("\"{TIMESTAMP_FIELD}\":");
    report.lines().filter(|l| !l.trim_start().starts_with(&key)).map(|l| format!("{l}\n")).collect()
}

/// A CSV table; every cell is already formatted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        writer.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            writer.write_record(row).map_err(io)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Cell helpers.
pub fn f(v: f64) -> String {
    format_float(v)
}

pub fn i<T: std::fmt::Display>(v: T) -> String {
    v.to_string()
}

/// Everything a command produces: a JSON report and its CSV rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub json: Value,
    pub table: Table,
}

impl Rendered {
    pub fn text(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(to_json_text(&self.json)),
            Format::Csv => self.table.to_csv(),
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_at_seventeen_digits() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, -0.0, f64::MIN_POSITIVE] {
            let s = format_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn json_text_is_valid_and_exact() {
        let v = serde_json::json!({"b": [1, 2.5, {"x": 0.1}], "a": "q\"uote", "c": null, "d": []});
        let text = to_json_text(&v);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }
}
