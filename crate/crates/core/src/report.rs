//! Tabular output as commented CSV or JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::VERSION;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, plain decimal where the exponent allows.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == v.trunc() && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..=15).contains(&exp) {
        format!("{v:.prec$}", prec = (16 - exp) as usize)
    } else {
        sci
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) if v.is_finite() => json!(v),
            Cell::Real(v) => Value::String(format_real(*v)),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Provenance written at the top of every output.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: String,
    /// Effective configuration, in a fixed order.
    pub config: Vec<(String, String)>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Header, columns: &[&str]) -> Self {
        Self { header, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# vandermonde {VERSION}");
        let _ = writeln!(out, "# command: {}", self.header.command);
        for (k, v) in &self.header.config {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "# seed: {}", self.header.seed);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let config: Map<String, Value> = self.header.config.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let doc = json!({
            "tool": "vandermonde",
            "version": VERSION,
            "command": self.header.command,
            "config": config,
            "seed": self.header.seed,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(15.0), "15");
        assert_eq!(format_real(44.0 / 3.0), "14.666666666666666");
        assert_eq!(format_real(2.0 / 3.0), "0.66666666666666663");
        assert_eq!(format_real(1e-9), "1.0000000000000001e-9");
        assert_eq!(format_real(f64::INFINITY), "inf");
        for v in [0.1, 1.0 / 7.0, 123456.789, 3.3e-6, 1e300, -2.5] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_and_json_agree() {
        let h = Header { command: "t".into(), config: vec![("n".into(), "4".into())], seed: 9 };
        let mut t = Table::new(h, &["a", "b", "c"]);
        t.push(vec![1usize.into(), (1.0 / 3.0).into(), "x,y".into()]);
        let csv = t.to_csv();
        assert!(csv.starts_with("# vandermonde"));
        assert!(csv.contains("# seed: 9\na,b,c\n1,0.33333333333333331,\"x,y\"\n"));
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0]["b"].as_f64().unwrap(), "0.33333333333333331".parse::<f64>().unwrap());
        assert_eq!(v["seed"], 9);
    }
}
