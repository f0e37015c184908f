use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};
use shearer_core::Scalar;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a command produces: a single record or a table of rows.
pub enum Artifact {
    Record(Value),
    Table {
        comment: Option<String>,
        header: Vec<String>,
        rows: Vec<Vec<Value>>,
    },
}

impl Artifact {
    pub fn table(header: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Artifact::Table {
            comment: None,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Artifact::Record(_) => Format::Json,
            Artifact::Table { .. } => Format::Csv,
        }
    }

    pub fn render(&self, format: Option<Format>) -> String {
        match (self, format.unwrap_or(self.default_format())) {
            (Artifact::Record(v), Format::Json) => pretty(v),
            (Artifact::Record(v), Format::Csv) => record_csv(v),
            (Artifact::Table { header, rows, .. }, Format::Json) => {
                let objects = rows
                    .iter()
                    .map(|row| {
                        Value::Object(header.iter().cloned().zip(row.iter().cloned()).collect::<Map<_, _>>())
                    })
                    .collect();
                pretty(&Value::Array(objects))
            }
            (Artifact::Table { comment, header, rows }, Format::Csv) => {
                let mut out = String::new();
                if let Some(c) = comment {
                    for line in c.lines() {
                        out.push_str("# ");
                        out.push_str(line);
                        out.push('\n');
                    }
                }
                out.push_str(&header.join(","));
                out.push('\n');
                for row in rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn record_csv(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let header: Vec<&str> = map.keys().map(String::as_str).collect();
            let cells: Vec<String> = map.values().map(csv_cell).collect();
            format!("{}\n{}\n", header.join(","), cells.join(","))
        }
        other => format!("value\n{}\n", csv_cell(other)),
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// A number in the backend's lossless form: a JSON number for floats, an
/// exact `"a/b"` string for rationals.
pub fn num<S: Scalar>(x: &S) -> Value {
    match S::BACKEND {
        shearer_core::Backend::Float => float(x.to_f64()),
        shearer_core::Backend::Rational => Value::String(x.to_exact_string()),
    }
}

pub fn nums<S: Scalar>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(num).collect())
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Configuration as a bit string, vertex 0 first.
pub fn bits(config: usize, n: usize) -> String {
    (0..n).map(|v| if config >> v & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn bool_bits(values: &[bool]) -> String {
    values.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
