//! Tabular output with fixed float formatting, written as CSV or JSON.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::Value;

use crate::CliError;

pub const SCHEMA: &str = "pt-lattice/1";

/// Significant digits kept in every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Complex(Complex64),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Complex64> for Cell {
    fn from(v: Complex64) -> Self {
        Cell::Complex(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(i64::try_from(v).unwrap_or(i64::MAX))
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<u8> for Cell {
    fn from(v: u8) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    /// Split into `_re`/`_im` in CSV, `{"re", "im"}` in JSON.
    pub complex: bool,
}

impl Column {
    pub fn real(name: &str) -> Self {
        Column { name: name.to_owned(), complex: false }
    }

    pub fn complex(name: &str) -> Self {
        Column { name: name.to_owned(), complex: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        Table { name: name.to_owned(), columns, rows: Vec::new() }
    }

    /// Panics on a width mismatch, which is a programming error.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn header(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.columns {
            if c.complex {
                out.push(format!("{}_re", c.name));
                out.push(format!("{}_im", c.name));
            } else {
                out.push(c.name.clone());
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(self.header())?;
        for row in &self.rows {
            let mut fields = Vec::with_capacity(row.len() + 2);
            for cell in row {
                match cell {
                    Cell::Real(v) => fields.push(format_float(*v)),
                    Cell::Int(v) => fields.push(v.to_string()),
                    Cell::Bool(v) => fields.push(v.to_string()),
                    Cell::Text(v) => fields.push(v.clone()),
                    Cell::Complex(z) => {
                        fields.push(format_float(z.re));
                        fields.push(format_float(z.im));
                    }
                }
            }
            writer.write_record(&fields)?;
        }
        writer.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    /// One row per line so that diffs stay readable.
    pub fn to_json(&self) -> Vec<u8> {
        let columns: Vec<Value> = self.columns.iter().map(|c| Value::from(c.name.as_str())).collect();
        let mut out = format!(
            "{{\"schema\":{},\"table\":{},\"columns\":{},\"rows\":[",
            Value::from(SCHEMA),
            Value::from(self.name.as_str()),
            Value::Array(columns)
        );
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            let values: Vec<Value> = row.iter().map(json_cell).collect();
            out.push_str(&Value::Array(values).to_string());
        }
        out.push_str("\n]}\n");
        out.into_bytes()
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] and normalizes `-0` to `0`.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return 0.0;
    }
    let text = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let rounded: f64 = text.parse().unwrap_or(x);
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Shortest round-trip text of the rounded value.
pub fn format_float(x: f64) -> String {
    let r = round_significant(x);
    if r.is_nan() {
        "NaN".to_owned()
    } else if r.is_infinite() {
        if r > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{r:?}")
    }
}

fn json_float(x: f64) -> Value {
    let r = round_significant(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Real(v) => json_float(*v),
        Cell::Int(v) => Value::from(*v),
        Cell::Bool(v) => Value::from(*v),
        Cell::Text(v) => Value::from(v.as_str()),
        Cell::Complex(z) => {
            let mut map = serde_json::Map::new();
            map.insert("re".to_owned(), json_float(z.re));
            map.insert("im".to_owned(), json_float(z.im));
            Value::Object(map)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(format_float(std::f64::consts::SQRT_2), "1.41421356237");
        assert_eq!(format_float(-0.0), "0.0");
        assert_eq!(format_float(600.0), "600.0");
        assert_eq!(format_float(1.0e-20), "1e-20");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
    }

    #[test]
    fn rounded_values_round_trip() {
        for x in [1.0 / 3.0, -std::f64::consts::E, 6.02214076e23, 1.602e-19] {
            let text = format_float(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(format_float(back), text);
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn complex_columns_split() {
        let mut t = Table::new("demo", vec![Column::real("k"), Column::complex("t")]);
        t.push(vec![Cell::Real(0.5), Cell::Complex(Complex64::new(1.0, -0.25))]);
        let csv = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(csv, "k,t_re,t_im\n0.5,1.0,-0.25\n");
        let json = String::from_utf8(t.to_json()).unwrap();
        assert!(json.starts_with("{\"schema\":\"pt-lattice/1\",\"table\":\"demo\""));
        assert!(json.contains("[0.5,{\"im\":-0.25,\"re\":1.0}]"));
    }

    #[test]
    fn nan_is_null_in_json() {
        let mut t = Table::new("demo", vec![Column::real("x")]);
        t.push(vec![Cell::Real(f64::NAN)]);
        assert!(String::from_utf8(t.to_json()).unwrap().contains("[null]"));
    }
}
