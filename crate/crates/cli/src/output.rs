//! Flat records written as JSON lines or CSV. Complex values are split
//! into `_re`/`_im` columns so every field is a scalar ready for plotting.

use crate::config::OutputFormat;
use num_complex::Complex64 as C;
use serde_json::{Map, Value};
use std::io::Write;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(pub Map<String, Value>);

impl Row {
    pub fn new(kind: &str) -> Row {
        Row::default().with("type", kind)
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Row {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.0.insert(key.to_string(), v.into());
    }

    pub fn complex(mut self, key: &str, z: C) -> Row {
        self.set_complex(key, z);
        self
    }

    pub fn set_complex(&mut self, key: &str, z: C) {
        self.set(&format!("{key}_re"), z.re);
        self.set(&format!("{key}_im"), z.im);
    }

    pub fn null_complex(mut self, key: &str) -> Row {
        self.set(&format!("{key}_re"), Value::Null);
        self.set(&format!("{key}_im"), Value::Null);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes rows in one format; the CSV header is taken from the first row.
pub struct Emitter<W: Write> {
    format: OutputFormat,
    out: W,
    header: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: OutputFormat, out: W) -> Self {
        Emitter { format, out, header: None }
    }

    pub fn emit(&mut self, row: &Row) -> std::io::Result<()> {
        match self.format {
            OutputFormat::JsonLines => {
                serde_json::to_writer(&mut self.out, &row.0)?;
                self.out.write_all(b"\n")
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if self.header.is_none() {
                    let h: Vec<String> = row.0.keys().cloned().collect();
                    w.write_record(&h)?;
                    self.header = Some(h);
                }
                let h = self.header.as_ref().unwrap();
                w.write_record(h.iter().map(|k| row.get(k).map(cell).unwrap_or_default()))?;
                let bytes = w.into_inner().map_err(|e| e.into_error())?;
                self.out.write_all(&bytes)
            }
        }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
