//! Tables with a fixed column schema, rendered as CSV or JSON.
//!
//! CSV numbers are written as `{:.16e}` (17 significant digits, so every
//! double round-trips) with LF line endings. JSON carries the same rows as
//! records, next to `schema` and `model` objects.

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // serde_json maps non-finite floats to null
            Cell::Num(x) => Value::from(*x),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

pub type Column = (&'static str, &'static str);

#[derive(Debug)]
pub struct Table {
    kind: String,
    columns: Vec<Column>,
    model: Value,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(kind: impl Into<String>, columns: &[Column], model: Value) -> Self {
        Table {
            kind: kind.into(),
            columns: columns.to_vec(),
            model,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the schema");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, meta: Option<Vec<(String, String)>>) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.csv(meta),
            Format::Json => self.json(meta),
        }
    }

    fn csv(&self, meta: Option<Vec<(String, String)>>) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        if let Some(meta) = meta {
            for (k, v) in meta {
                out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
            }
            out.extend_from_slice(format!("# table: {}\n", self.kind).as_bytes());
            out.extend_from_slice(format!("# model: {}\n", self.model).as_bytes());
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let err = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(self.columns.iter().map(|c| c.0)).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(err)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    fn json(&self, meta: Option<Vec<(String, String)>>) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let rec: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.0.to_string(), cell.json()))
                    .collect();
                Value::Object(rec)
            })
            .collect();
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|(name, description)| json!({ "name": name, "description": description }))
            .collect();
        let mut doc = Map::new();
        doc.insert("schema".into(), json!({ "table": self.kind, "columns": columns }));
        doc.insert("model".into(), self.model.clone());
        if let Some(meta) = meta {
            doc.insert(
                "meta".into(),
                Value::Object(meta.into_iter().map(|(k, v)| (k, Value::from(v))).collect()),
            );
        }
        doc.insert("rows".into(), Value::Array(rows));
        let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}
