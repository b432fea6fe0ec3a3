//! Rendering of records as JSON, CSV or `key: value` text.
//!
//! Every record is a JSON object whose first fields are `"schema": 1`, the
//! command name and the seed. Field order follows the struct definitions.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use congrkit_core::kazhdan::{KazhdanBounds, SpectralData};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Header fields shared by every record.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
}

impl Header {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
        }
    }
}

/// The serialized form of [`SpectralData`].
#[derive(Clone, Debug, Serialize)]
pub struct SpectralRecord {
    pub mu: f64,
    pub order: usize,
    pub generators: usize,
    pub subspace_dim: usize,
    pub residual: f64,
    pub matvecs: usize,
    pub solver: &'static str,
}

impl From<&SpectralData> for SpectralRecord {
    fn from(s: &SpectralData) -> Self {
        Self {
            mu: s.mu,
            order: s.order,
            generators: s.generators,
            subspace_dim: s.subspace_dim,
            residual: s.residual,
            matvecs: s.matvecs,
            solver: if s.dense { "dense" } else { "lanczos" },
        }
    }
}

/// The serialized form of [`KazhdanBounds`].
#[derive(Clone, Debug, Serialize)]
pub struct BoundsRecord {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub vacuous: bool,
    pub lower_method: &'static str,
    pub upper_method: &'static str,
    pub spectral: Option<SpectralRecord>,
}

impl From<&KazhdanBounds> for BoundsRecord {
    fn from(b: &KazhdanBounds) -> Self {
        Self {
            lower: b.lower,
            upper: b.upper,
            exact: b.exact,
            vacuous: b.vacuous,
            lower_method: b.lower_method.as_str(),
            upper_method: b.upper_method.as_str(),
            spectral: b.spectral.as_ref().map(SpectralRecord::from),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens nested objects to dotted keys; arrays of scalars are joined
/// with spaces and arrays of objects are indexed.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    go(&key, x, out);
                }
            }
            Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in items.iter().enumerate() {
                    go(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar).collect();
                out.push((prefix.to_string(), joined.join(" ")));
            }
            other => out.push((prefix.to_string(), scalar(other))),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

/// Renders one record.
pub fn render<T: Serialize>(record: &T, format: Format) -> String {
    let value = serde_json::to_value(record).expect("records serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (k, v) in flatten(&value) {
                writeln!(s, "{k}: {v}").expect("writing to a string");
            }
            s
        }
        Format::Csv => {
            let pairs = flatten(&value);
            let keys: Vec<String> = pairs.iter().map(|(k, _)| k.clone()).collect();
            let vals: Vec<String> = pairs.into_iter().map(|(_, v)| v).collect();
            let mut s = csv_line(&keys);
            s.push_str(&csv_line(&vals));
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Demo {
        #[serde(flatten)]
        header: Header,
        values: Vec<u32>,
        nested: Option<Inner>,
    }

    #[derive(Serialize)]
    struct Inner {
        x: f64,
        label: String,
    }

    #[test]
    fn renders_in_field_order() {
        let d = Demo {
            header: Header::new("demo", 3),
            values: vec![1, 2],
            nested: Some(Inner {
                x: 0.5,
                label: "a,b".into(),
            }),
        };
        assert_eq!(
            render(&d, Format::Text),
            "schema: 1\ncommand: demo\nseed: 3\nvalues: 1 2\nnested.x: 0.5\nnested.label: a,b\n"
        );
        let csv = render(&d, Format::Csv);
        assert_eq!(
            csv,
            "schema,command,seed,values,nested.x,nested.label\n1,demo,3,1 2,0.5,\"a,b\"\n"
        );
        assert!(render(&d, Format::Json).starts_with("{\n  \"schema\": 1,"));
    }
}
