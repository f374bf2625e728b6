//! Record sinks: JSON lines, CSV, or aligned `key=value` text.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Human => "human",
        }
    }
}

pub struct Emitter<W: Write> {
    format: Format,
    config: Value,
    columns: &'static [&'static str],
    out: W,
    started: bool,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, config: Value, columns: &'static [&'static str], out: W) -> Self {
        Self {
            format,
            config,
            columns,
            out,
            started: false,
        }
    }

    pub fn emit(&mut self, mut record: Map<String, Value>) -> Result<(), Failure> {
        match self.format {
            Format::Json => {
                record.insert("config".into(), self.config.clone());
                let line =
                    serde_json::to_string(&Value::Object(record)).expect("records are valid JSON");
                writeln!(self.out, "{line}")?;
            }
            Format::Csv => {
                if !self.started {
                    writeln!(self.out, "# config: {}", self.config)?;
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(self.columns)?;
                    self.flush_csv(w)?;
                    self.started = true;
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.columns.iter().map(|c| cell(record.get(*c))))?;
                self.flush_csv(w)?;
            }
            Format::Human => {
                if !self.started {
                    writeln!(self.out, "# {}", self.config)?;
                    self.started = true;
                }
                let parts: Vec<String> = record
                    .iter()
                    .map(|(k, v)| format!("{k}={}", cell(Some(v))))
                    .collect();
                writeln!(self.out, "{}", parts.join("  "))?;
            }
        }
        Ok(())
    }

    fn flush_csv(&mut self, w: csv::Writer<Vec<u8>>) -> Result<(), Failure> {
        let bytes = w
            .into_inner()
            .map_err(|e| Failure::Numeric(format!("output error: {e}")))?;
        self.out.write_all(&bytes)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W, Failure> {
        self.out.flush()?;
        Ok(self.out)
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

/// Builds a JSON object from `key => value` pairs.
#[macro_export]
macro_rules! record {
    ($($key:expr => $value:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $( m.insert($key.to_string(), serde_json::json!($value)); )*
        m
    }};
}
