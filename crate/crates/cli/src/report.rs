//! Per-point records and their JSON and CSV renderings.
//!
//! Records are emitted in lexicographic point order and quantities in
//! alphabetical order, so identical inputs give byte-identical output.
//! Complex numbers are `[re, im]` pairs; in CSV they become two columns
//! whose final index is 0 for the real and 1 for the imaginary part.

use std::collections::BTreeMap;
use std::io::Write;

use gaugeframe::geometry::TwoForm;
use gaugeframe::linalg::{CMatrix, C64};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::grid::Grid;

/// Output format of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Nested JSON document.
    Json,
    /// Flat CSV table with one row per point.
    Csv,
}

/// Named outputs at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    /// Multi-index of the point.
    pub index: [usize; 4],
    /// Coordinates of the point.
    pub point: [f64; 4],
    /// Quantities by name.
    pub values: BTreeMap<String, Value>,
}

impl Record {
    /// An empty record for point `p` of `grid`.
    pub fn new(grid: &Grid, p: usize) -> Self {
        Self {
            index: grid.multi_index(p),
            point: grid.coords(p),
            values: BTreeMap::new(),
        }
    }

    /// Adds a quantity.
    pub fn put(&mut self, name: &str, value: Value) {
        self.values.insert(name.to_string(), value);
    }
}

/// All records of one command together with residual maxima.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// Subcommand that produced the report.
    pub command: String,
    /// Grid the records live on.
    pub grid: Grid,
    /// Records in point order.
    pub records: Vec<Record>,
    /// Largest magnitude of each listed quantity over the grid.
    pub maxima: BTreeMap<String, f64>,
}

impl Report {
    /// Builds a report and the maxima of the quantities in `tracked`.
    pub fn new(command: &str, grid: &Grid, records: Vec<Record>, tracked: &[&str]) -> Self {
        let maxima = tracked
            .iter()
            .map(|&name| {
                let worst = records
                    .iter()
                    .filter_map(|r| r.values.get(name))
                    .map(max_abs_value)
                    .fold(0.0, f64::max);
                (name.to_string(), worst)
            })
            .collect();
        Self {
            command: command.to_string(),
            grid: grid.clone(),
            records,
            maxima,
        }
    }

    /// The nested JSON document.
    pub fn to_json(&self) -> Value {
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "index": r.index,
                    "point": r.point,
                    "values": Value::Object(r.values.clone().into_iter().collect::<Map<_, _>>()),
                })
            })
            .collect();
        json!({
            "schema": crate::config::SCHEMA_VERSION,
            "command": self.command,
            "grid": {
                "shape": self.grid.shape,
                "spacing": self.grid.spacing,
                "origin": self.grid.origin,
            },
            "maxima": self.maxima,
            "records": records,
        })
    }

    /// Writes the report in the requested format.
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json()).map_err(|e| CliError::Parse(e.to_string()))?;
                writeln!(out, "{text}")?;
            }
            Format::Csv => self.write_csv(out)?,
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = ["i0", "i1", "i2", "i3", "x0", "x1", "x2", "x3"]
            .map(String::from)
            .to_vec();
        if let Some(first) = self.records.first() {
            for (name, v) in &first.values {
                flatten_names(name, v, &mut header);
            }
        }
        w.write_record(&header).map_err(csv_error)?;
        for r in &self.records {
            let mut row: Vec<String> = r.index.iter().map(|i| i.to_string()).collect();
            row.extend(r.point.iter().map(|x| x.to_string()));
            for v in r.values.values() {
                flatten_cells(v, &mut row);
            }
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e.to_string()))
}

fn flatten_names(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten_names(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(prefix.to_string()),
    }
}

fn flatten_cells(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Array(items) => items.iter().for_each(|x| flatten_cells(x, out)),
        Value::Null => out.push(String::new()),
        Value::String(s) => out.push(s.clone()),
        other => out.push(other.to_string()),
    }
}

/// Largest absolute number inside a value; `inf` for a null (non-finite) entry.
pub fn max_abs_value(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().map_or(0.0, f64::abs),
        Value::Array(items) => items.iter().map(max_abs_value).fold(0.0, f64::max),
        Value::Null => f64::INFINITY,
        _ => 0.0,
    }
}

/// `[re, im]`.
pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

/// A list of complex numbers.
pub fn complex_list(z: &[C64]) -> Value {
    Value::Array(z.iter().copied().map(complex).collect())
}

/// A complex matrix as rows of `[re, im]` pairs.
pub fn complex_matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Components of a real two-form in canonical pair order.
pub fn real_form(f: &TwoForm<f64>) -> Value {
    json!(f.comp)
}

/// Components of a complex two-form in canonical pair order.
pub fn complex_form(f: &TwoForm<C64>) -> Value {
    complex_list(&f.comp)
}
