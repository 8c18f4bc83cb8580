//! Row tables and their CSV / JSON forms.
//!
//! Reals are written in plain decimal notation with 12 significant digits, so
//! parsing a file and writing it again reproduces it byte for byte.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SweepError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig12(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn parse(s: &str) -> Cell {
        if s.is_empty() {
            return Cell::Empty;
        }
        match s {
            "true" => return Cell::Bool(true),
            "false" => return Cell::Bool(false),
            "nan" => return Cell::Num(f64::NAN),
            "inf" => return Cell::Num(f64::INFINITY),
            "-inf" => return Cell::Num(f64::NEG_INFINITY),
            _ => {}
        }
        let numeric = s
            .bytes()
            .all(|b| b.is_ascii_digit() || b == b'-' || b == b'.');
        if numeric {
            if !s.contains('.') {
                if let Ok(i) = s.parse() {
                    return Cell::Int(i);
                }
            } else if let Ok(x) = s.parse() {
                return Cell::Num(x);
            }
        }
        Cell::Text(s.to_string())
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => format_sig12(*x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(serde_json::Value::Null, serde_json::Value::Number),
            Cell::Int(i) => (*i).into(),
            Cell::Bool(b) => (*b).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// `x` with 12 significant digits in decimal notation.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{:.11e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 11 {
        format!("{digits}{}", "0".repeat((exp - 11) as usize))
    } else if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub toolkit: String,
    pub config_hash: String,
}

impl Provenance {
    pub fn new(config_hash: String) -> Self {
        Self {
            toolkit: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            config_hash,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        if !self.columns.is_empty() {
            w.write_record(&self.columns).expect("in-memory write");
        }
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn from_csv(text: &str) -> Result<Self, SweepError> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let columns: Vec<String> = r
            .headers()
            .map_err(|e| SweepError::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| SweepError::Parse(e.to_string()))?;
            rows.push(rec.iter().map(Cell::parse).collect());
        }
        Ok(Self { columns, rows })
    }

    pub fn to_json(&self, provenance: &Provenance) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ "provenance": provenance, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values");
        s.push('\n');
        s
    }
}

/// Writes `contents` to `path`, or to stdout when `path` is `-`.
pub fn write_output(path: &Path, contents: &str) -> Result<(), SweepError> {
    if path == Path::new("-") {
        std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| SweepError::Io {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
    } else {
        std::fs::write(path, contents).map_err(|e| SweepError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}
