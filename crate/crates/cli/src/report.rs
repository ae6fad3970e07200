// SPDX-License-Identifier: Apache-2.0

//! Report envelope, canonical JSON and the CSV projection.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips any `f64` exactly; non-finite values become `null`.

use std::io;

use qdsim_core::linalg::CMatrix;
use qdsim_core::C64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::config::RunConfig;

pub const TOOL: &str = "qdsim";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_owned()
    }
}

struct CanonicalFormatter(PrettyFormatter<'static>);

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// `[re, im]`.
pub fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn amplitudes<'a>(zs: impl IntoIterator<Item = &'a C64>) -> Vec<[f64; 2]> {
    zs.into_iter().map(|z| complex(*z)).collect()
}

/// Row-major nested `[re, im]` arrays.
pub fn matrix(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex(m[(i, j)])).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub arguments: Value,
    pub config: RunConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub result: Value,
}

/// Flat table of the report's main result, for CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells")
    }
}

/// Cell text for CSV: floats canonical, other JSON scalars verbatim.
pub fn cell(v: impl Into<Cell>) -> String {
    match v.into() {
        Cell::Float(f) => {
            if f.is_finite() {
                format_f64(f)
            } else {
                String::new()
            }
        }
        Cell::Text(t) => t,
    }
}

pub enum Cell {
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Text(v.to_string())
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

/// A finished command: the report plus its CSV projection.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Report,
    pub table: Table,
}

impl Output {
    pub fn render(&self, format: crate::config::Format) -> String {
        match format {
            crate::config::Format::Json => to_canonical_json(&self.report),
            crate::config::Format::Csv => self.table.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_f64(0.25), "2.5000000000000000e-1");
        assert_eq!(format_f64(320.0), "3.2000000000000000e2");
        assert_eq!(format_f64(f64::NAN), "null");
        for v in [0.1, 1.0 / 3.0, 6.4e-6, -1.2345678901234567, 5e-324, f64::MAX] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn canonical_json_is_valid_json() {
        let text = to_canonical_json(&serde_json::json!({"a": 0.1, "b": [1, 2.5], "c": null}));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"], 0.1);
        assert_eq!(back["b"][0], 1);
        assert!(text.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn csv_quotes_and_separates() {
        let mut t = Table::new(&["label", "value"]);
        t.push(vec![cell("(A,C)|00>"), cell(0.5)]);
        t.push(vec![cell("a,b"), cell(f64::NAN)]);
        assert_eq!(
            t.to_csv(),
            "label,value\n\"(A,C)|00>\",5.0000000000000000e-1\n\"a,b\",\n"
        );
    }
}
