//! Report envelope and rendering in the three output formats.

use std::io::Write;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde_json::{json, Map, Value};

use hspsim_core::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// What a command produced, before rendering.
pub struct Report {
    pub body: Map<String, Value>,
    /// table for `--format csv`; commands without one fall back to `key,value`
    pub csv: Option<String>,
    pub exit: u8,
}

impl Report {
    pub fn new(body: Map<String, Value>) -> Self {
        Report { body, csv: None, exit: 0 }
    }
}

/// `SOURCE_DATE_EPOCH` pins the timestamp for reproducible reports.
pub fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned.unwrap_or_else(Utc::now).to_rfc3339_opts(SecondsFormat::Secs, true)
}

pub fn header(seed: u64, group_spec: &str) -> Value {
    json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "group_spec": group_spec,
        "timestamp": timestamp(),
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_lines(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_lines(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", flat(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", flat(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_lines(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

fn fallback_csv(body: &Map<String, Value>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in body {
        w.write_record([k.as_str(), &flat(v)])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Renders `report` under `header`. CSV output carries no header so that
/// exported tables stay byte-for-byte comparable.
pub fn render(report: &Report, header: Value, format: Format) -> Result<String> {
    let mut full = Map::new();
    full.insert("header".into(), header);
    full.extend(report.body.clone());
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Value::Object(full))?;
            s.push('\n');
            s
        }
        Format::Csv => match &report.csv {
            Some(c) => c.clone(),
            None => fallback_csv(&report.body)?,
        },
        Format::Text => {
            let mut s = String::new();
            text_lines(&Value::Object(full), 0, &mut s);
            s
        }
    })
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
