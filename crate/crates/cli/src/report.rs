//! Report documents and their CSV / JSON renderings.
//!
//! Output is a pure function of the document: floats always print with 17
//! significant digits, JSON keys are sorted and nothing time-dependent is
//! written.

use std::io::Write;

use serde_json::{json, Map, Value};

pub const TOOL: &str = "photostat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // Decimal strings keep every digit through JSON parsers.
            Cell::Float(v) => json!(fmt_float(*v)),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip.
/// Negative zero prints as zero.
pub fn fmt_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(name: impl Into<String>, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    /// Parameters and scalar results, in insertion order for CSV.
    pub params: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            params: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl Into<Cell>) -> &mut Self {
        self.params.push((key.into(), value.into()));
        self
    }

    pub fn table(&mut self, table: Table) -> &mut Self {
        self.tables.push(table);
        self
    }

    pub fn get_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn get_param(&self, key: &str) -> Option<&Cell> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    /// `#`-prefixed header lines, then each table as a header row plus data
    /// rows, tables separated by a blank line.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# {TOOL} {VERSION}")?;
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k}: {}", v.text())?;
        }
        for (i, table) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            writeln!(out, "# table: {}", table.name)?;
            let mut w = csv::WriterBuilder::new().from_writer(&mut *out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::text))?;
            }
            w.flush()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
                (t.name.clone(), json!({ "columns": t.columns, "rows": rows }))
            })
            .collect();
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "params": params,
            "tables": tables,
        })
    }
}
