//! Machine-readable output. JSON objects have sorted keys and carry every
//! integer as a decimal string, so re-serializing a parsed record is byte-stable.

use std::io::{self, Write};

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Enumeration,
    Both,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Enumeration => "enumeration",
            Provenance::Both => "both",
        }
    }
}

/// Flat CSV projection of a record.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Record {
    pub query: &'static str,
    pub params: Map<String, Value>,
    pub results: Map<String, Value>,
    pub provenance: Provenance,
    pub table: Table,
}

impl Record {
    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("query".into(), Value::from(self.query));
        root.insert("params".into(), Value::Object(self.params.clone()));
        root.insert("results".into(), Value::Object(self.results.clone()));
        root.insert("provenance".into(), Value::from(self.provenance.as_str()));
        Value::Object(root)
    }

    pub fn emit(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json()).map_err(io::Error::other)?;
                writeln!(out, "{text}")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.header).map_err(io::Error::other)?;
                for row in &self.table.rows {
                    w.write_record(row).map_err(io::Error::other)?;
                }
                w.flush()
            }
        }
    }
}

/// An integer as a JSON decimal string.
pub fn num(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn nums<T: ToString>(vs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(vs.into_iter().map(num).collect())
}
