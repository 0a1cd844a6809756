use std::io::Write;

use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// 12 significant digits, '.' decimal, exponent form outside [1e−4, 1e12).
pub fn fmt12(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(v);
    if r == 0.0 {
        "0".into()
    } else if (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn num(v: f64) -> Value {
    Number::from_f64(round12(v)).map(Value::Number).unwrap_or(Value::Null)
}

pub fn int(v: usize) -> Value {
    Value::from(v as u64)
}

/// A table with its reproducibility header.
pub struct Document {
    pub header: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Document {
    pub fn new(command: &str, a: Option<f64>, eta: Option<f64>, extension: Option<&str>, scan: Value) -> Self {
        let mut header = Map::new();
        header.insert("schema_version".into(), SCHEMA_VERSION.into());
        header.insert("tool".into(), "sinvar".into());
        header.insert("tool_version".into(), TOOL_VERSION.into());
        header.insert("command".into(), command.into());
        header.insert("a".into(), a.map(num).unwrap_or(Value::Null));
        header.insert("eta".into(), eta.map(num).unwrap_or(Value::Null));
        header.insert("extension".into(), extension.map(Value::from).unwrap_or(Value::Null));
        header.insert("scan_config".into(), scan);
        Self { header, columns: Vec::new(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: Value) {
        self.header.insert(key.into(), value);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (k, v) in &self.header {
            writeln!(out, "# {k}={}", csv_meta(v))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(csv_cell))?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut doc = self.header.clone();
        doc.insert("columns".into(), self.columns.iter().map(|c| Value::from(*c)).collect());
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
        writeln!(out)
    }
}

fn csv_meta(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Number(n) => n.as_f64().map(fmt12).unwrap_or_else(|| n.to_string()),
        other => other.to_string(),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(fmt12).unwrap_or_default(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
