//! Rendering of command results as single-line JSON, CSV or plain text.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// Tabular results keep their rows under this key.
pub const ROWS: &str = "rows";

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => value.to_string(),
        Format::Csv => render_csv(value),
        Format::Plain => render_plain(value),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        other => other.to_string(),
    }
}

fn render_csv(value: &Value) -> String {
    let empty = Map::new();
    let obj = value.as_object().unwrap_or(&empty);
    let rows: Vec<&Map<String, Value>> = match obj.get(ROWS).and_then(Value::as_array) {
        Some(rows) => rows.iter().filter_map(Value::as_object).collect(),
        None => vec![obj],
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        let header: Vec<&String> = first.keys().collect();
        w.write_record(header.iter().map(|k| k.as_str())).expect("in-memory csv");
        for row in &rows {
            w.write_record(header.iter().map(|k| row.get(*k).map(cell).unwrap_or_default()))
                .expect("in-memory csv");
        }
    }
    let bytes = w.into_inner().expect("in-memory csv");
    String::from_utf8(bytes).expect("csv output is utf-8").trim_end().to_string()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

fn render_plain(value: &Value) -> String {
    let mut lines = Vec::new();
    if let Some(obj) = value.as_object() {
        for (k, v) in obj {
            if k == ROWS {
                continue;
            }
            let mut pairs = Vec::new();
            flatten(k, v, &mut pairs);
            lines.extend(pairs.into_iter().map(|(k, v)| format!("{k}: {v}")));
        }
        if let Some(rows) = obj.get(ROWS).and_then(Value::as_array) {
            for row in rows {
                let mut pairs = Vec::new();
                flatten("", row, &mut pairs);
                let parts: Vec<String> = pairs.into_iter().map(|(k, v)| format!("{k}={v}")).collect();
                lines.push(parts.join(" "));
            }
        }
    } else {
        lines.push(cell(value));
    }
    lines.join("\n")
}
