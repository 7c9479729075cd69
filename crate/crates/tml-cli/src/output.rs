//! Table emission. CSV is RFC-4180-style (header row, UTF-8, '.' decimal
//! separator, 17 significant digits for reals); JSON is an array of
//! objects with the same field names. Only data goes through here —
//! diagnostics belong on stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{Map, Number, Value};

use crate::args::{Format, OutputArgs};

/// One table cell. `Real(NaN)` prints as "NaN" in CSV and null in JSON;
/// `Null` is an empty CSV field and a JSON null.
pub enum Cell {
    Int(i64),
    Uint(u64),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Real(v) => real_str(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Uint(v) => Value::from(*v),
            Cell::Real(v) => Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
        }
    }
}

/// 17 significant digits — enough to round-trip any f64.
fn real_str(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Streaming table writer: CSV rows go out as they arrive, JSON rows are
/// buffered so the document is one well-formed array.
pub struct TableSink {
    header: &'static [&'static str],
    inner: Inner,
}

enum Inner {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Json { out: Box<dyn Write>, rows: Vec<Value> },
}

impl TableSink {
    pub fn new(out: &OutputArgs, header: &'static [&'static str]) -> io::Result<TableSink> {
        let w: Box<dyn Write> = match &out.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        };
        let inner = match out.format {
            Format::Csv => {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(header)?;
                Inner::Csv(Box::new(wtr))
            }
            Format::Json => Inner::Json { out: w, rows: Vec::new() },
        };
        Ok(TableSink { header, inner })
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.header.len());
        match &mut self.inner {
            Inner::Csv(w) => w.write_record(cells.iter().map(Cell::csv))?,
            Inner::Json { rows, .. } => {
                let mut obj = Map::with_capacity(cells.len());
                for (name, cell) in self.header.iter().zip(&cells) {
                    obj.insert((*name).to_string(), cell.json());
                }
                rows.push(Value::Object(obj));
            }
        }
        Ok(())
    }

    pub fn finish(self) -> io::Result<()> {
        match self.inner {
            Inner::Csv(mut w) => w.flush(),
            Inner::Json { mut out, rows } => {
                serde_json::to_writer_pretty(&mut out, &Value::Array(rows))
                    .map_err(io::Error::from)?;
                writeln!(out)?;
                out.flush()
            }
        }
    }
}
