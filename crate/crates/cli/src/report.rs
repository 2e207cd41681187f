use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell. Counts stay strings so they survive any width.
#[derive(Debug, Clone)]
pub enum Cell {
    Count(String),
    Float(f64),
    Text(String),
    Flag(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Count(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => fmt_float(*x),
            Cell::Flag(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Count(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(x) => float(*x),
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Float)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

pub fn count(x: impl ToString) -> Cell {
    Cell::Count(x.to_string())
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Value,
}

impl Table {
    pub fn new(header: &[&'static str], meta: Value) -> Table {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
            meta,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))
                        .expect("in-memory write");
                }
                w.into_inner().expect("in-memory flush")
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({ "meta": self.meta, "rows": rows });
                let mut out = serde_json::to_vec_pretty(&doc).expect("json values serialize");
                out.push(b'\n');
                out
            }
        }
    }

    pub fn emit(&self, format: Format, output: Option<&Path>) -> Result<(), Failure> {
        let bytes = self.render(format);
        match output {
            Some(p) => std::fs::write(p, bytes)
                .map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure::Validation(e.to_string())),
        }
    }
}

/// `%.15g`: fifteen significant digits, trailing zeros dropped.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (14 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A JSON number carrying the same digits as [`fmt_float`].
pub fn float(x: f64) -> Value {
    fmt_float(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}
