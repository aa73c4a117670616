//! Tabular results and their CSV and JSON renderings.
//!
//! Reals are written in scientific notation with nine significant digits so
//! that identical runs produce byte-identical files.

use crate::cli::FormatArg;
use crate::config::RunConfig;
use crate::error::Result;
use serde::Serialize;
use serde_json::{Map, Value};
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Real(f64),
    Count(u64),
    Flag(bool),
    Missing,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Real(x) => format_real(*x),
            Cell::Count(n) => n.to_string(),
            Cell::Flag(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Real(x) if x.is_finite() => {
                let rounded: f64 = format_real(*x).parse().unwrap_or(*x);
                serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
            Cell::Real(_) | Cell::Missing => Value::Null,
            Cell::Count(n) => Value::from(*n),
            Cell::Flag(b) => Value::Bool(*b),
        }
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{x:.8e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::to_csv))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, config: &RunConfig, mut out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Document<'a> {
            meta: &'a RunConfig,
            rows: Vec<Map<String, Value>>,
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| ((*c).to_owned(), cell.to_json()))
                    .collect()
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &Document { meta: config, rows })?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn write<W: Write>(&self, config: &RunConfig, out: W) -> Result<()> {
        match config.format {
            FormatArg::Csv => self.write_csv(out),
            FormatArg::Json => self.write_json(config, out),
        }
    }
}
