//! Table writers. Floats are written with 17 significant digits so every
//! value round-trips exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
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

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// `{:.16e}` for finite values; `NaN`, `inf`, `-inf` otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    /// Non-finite floats become `null`.
    fn json_text(&self) -> String {
        match self {
            Cell::Float(v) if !v.is_finite() => "null".into(),
            other => other.csv_text(),
        }
    }
}

/// Named columns with rows of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }
}

/// Writes `table` to `path`; a header row for CSV, one object per row with
/// keys in column order for JSON lines.
pub fn emit_records(table: &Table, format: Format, path: &Path) -> Result<(), CliError> {
    if table.rows.is_empty() {
        return Err(CliError::Validation(format!("{}: no records to write", table.name)));
    }
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            let io = |e: csv::Error| CliError::io(path, e.into());
            w.write_record(&table.columns).map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv_text)).map_err(io)?;
            }
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
        Format::Jsonl => {
            let keys: Vec<String> = table
                .columns
                .iter()
                .map(|c| serde_json::to_string(c).expect("strings serialize"))
                .collect();
            for row in &table.rows {
                let fields: Vec<String> = keys
                    .iter()
                    .zip(row)
                    .map(|(k, v)| format!("{k}:{}", v.json_text()))
                    .collect();
                writeln!(out, "{{{}}}", fields.join(",")).map_err(|e| CliError::io(path, e))?;
            }
            out.flush().map_err(|e| CliError::io(path, e))?;
        }
    }
    Ok(())
}
