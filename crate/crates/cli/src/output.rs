//! Rendering of command results as JSON, CSV or text.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result: a JSON document plus an optional table for CSV.
pub struct Report {
    pub doc: Value,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Report {
    /// `doc` must be an object; keys render in sorted order.
    pub fn new(schema: &str, doc: Value) -> Self {
        let mut out = Map::new();
        out.insert("schema".into(), Value::String(schema.into()));
        if let Value::Object(fields) = doc {
            out.extend(fields);
        }
        Report {
            doc: Value::Object(out),
            table: None,
        }
    }

    pub fn with_table(mut self, header: Vec<String>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header, rows));
        self
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round12(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

pub fn render(mut report: Report, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    round_floats(&mut report.doc);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report.doc)?;
            writeln!(out)
        }
        Format::Text => {
            let mut pairs = Vec::new();
            flatten("", &report.doc, &mut pairs);
            for (k, v) in pairs {
                writeln!(out, "{k}: {v}")?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            match report.table {
                Some((header, rows)) => {
                    w.write_record(&header)?;
                    for row in rows {
                        w.write_record(&row)?;
                    }
                }
                None => {
                    let mut pairs = Vec::new();
                    flatten("", &report.doc, &mut pairs);
                    w.write_record(["key", "value"])?;
                    for (k, v) in pairs {
                        w.write_record([k, v])?;
                    }
                }
            }
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(0.0), 0.0);
        let mut buf = Vec::new();
        render(Report::new("t", json!({"x": 2.0f64 / 3.0, "r": "1/3"})), Format::Json, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("0.666666666667"));
        assert!(text.contains("\"schema\": \"t\""));
    }

    #[test]
    fn text_and_csv_flatten() {
        let r = || Report::new("t", json!({"a": {"b": 1}, "c": [1, 2]}));
        let mut buf = Vec::new();
        render(r(), Format::Text, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a.b: 1\nc: [1,2]\nschema: t\n");
        let mut buf = Vec::new();
        render(r(), Format::Csv, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("key,value\na.b,1\n"));
    }
}
