//! Record tables and their CSV / JSON serialization.

use std::fmt;
use std::io::{self, Write};

use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Value {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Value::Missing, Value::Float)
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Float(x) => Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Int(n) => Json::from(*n),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::Missing => Json::Null,
        }
    }
}

/// Floats use `{:?}`: the shortest string that parses back to the same bits,
/// switching to exponent form for very large or small magnitudes.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => f.write_str(s),
            Value::Missing => Ok(()),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as u64)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

pub type Fields = Vec<(&'static str, Value)>;

/// Everything one command emits.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Fields,
    pub columns: Vec<&'static str>,
    pub records: Vec<Vec<Value>>,
    pub summary: Fields,
}

impl Report {
    pub fn new(command: &'static str, params: Fields, columns: &[&'static str]) -> Self {
        Self { command, params, columns: columns.to_vec(), records: Vec::new(), summary: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.records.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.records {
            w.write_record(row.iter().map(ToString::to_string))?;
        }
        w.flush()
    }

    /// Summary as `key=value` lines.
    pub fn write_summary(&self, mut out: impl Write) -> io::Result<()> {
        for (k, v) in &self.summary {
            writeln!(out, "{k}={v}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Json {
        let fields = |f: &Fields| Json::Object(f.iter().map(|(k, v)| ((*k).to_owned(), v.to_json())).collect());
        let records = self
            .records
            .iter()
            .map(|row| {
                Json::Object(self.columns.iter().zip(row).map(|(k, v)| ((*k).to_owned(), v.to_json())).collect())
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Json::String(self.command.into()));
        top.insert("params".into(), fields(&self.params));
        top.insert("records".into(), Json::Array(records));
        top.insert("summary".into(), fields(&self.summary));
        Json::Object(top)
    }

    pub fn write_json(&self, mut out: impl Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }
}
