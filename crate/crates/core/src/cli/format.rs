//! Locale-independent rendering of tables as CSV or JSON.
//!
//! Reals are written in decimal scientific notation with 12 significant
//! digits; non-finite values never reach the output and are replaced by an
//! error string.

use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Marker written in place of a non-finite real.
pub const NON_FINITE: &str = "error:NonFinite";

/// `x` with 12 significant digits and a signed exponent, e.g. `6.00000000000e-1`,
/// `1.50000000000e+0`.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        // normalise −0 so identical runs cannot differ in a sign bit
        let x = if x == 0.0 { 0.0 } else { x };
        let text = format!("{x:.11e}");
        match text.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => text,
        }
    } else {
        NON_FINITE.to_string()
    }
}

/// A single output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn error(name: &str) -> Self {
        Cell::Text(format!("error:{name}"))
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => real(*x),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => json_real(*x),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<i32> for Cell {
    fn from(i: i32) -> Self {
        Cell::Int(i64::from(i))
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i64::from(i))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// A real as a JSON number carrying exactly the text of [`real`].
pub fn json_real(x: f64) -> Value {
    let text = real(x);
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(text),
    }
}

pub fn json_reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_real(x)).collect())
}

/// Column-oriented table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as an array of objects keyed by column name.
    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (name, cell) in self.columns.iter().zip(row) {
                        obj.insert((*name).to_string(), cell.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Top-level JSON document: schema version, command, units, then `body`.
pub fn document(command: &str, units: &[(&str, &str)], body: Map<String, Value>) -> String {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    doc.insert("command".into(), Value::from(command));
    let mut unit_map = Map::new();
    for (k, v) in units {
        unit_map.insert((*k).to_string(), Value::from(*v));
    }
    doc.insert("units".into(), Value::Object(unit_map));
    doc.extend(body);
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))
        .expect("serializing an in-memory JSON value cannot fail");
    text.push('\n');
    text
}
