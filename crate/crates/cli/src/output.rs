use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use unf_core::ode::fmt17;

use crate::args::Format;

pub const SCHEMA_VERSION: u64 = 1;

/// One command result, ready to be printed either way.
pub struct Output {
    pub kind: String,
    pub data: Value,
    /// Native table for commands whose natural form is a CSV file.
    pub table: Option<Vec<u8>>,
}

impl Output {
    pub fn new<T: Serialize>(kind: &str, data: &T) -> serde_json::Result<Self> {
        Ok(Self {
            kind: kind.to_string(),
            data: serde_json::to_value(data)?,
            table: None,
        })
    }

    pub fn with_table(mut self, table: Vec<u8>) -> Self {
        self.table = Some(table);
        self
    }

    fn default_format(&self) -> Format {
        if self.table.is_some() {
            Format::Csv
        } else {
            Format::Json
        }
    }

    pub fn render(&self, format: Option<Format>) -> Vec<u8> {
        match format.unwrap_or_else(|| self.default_format()) {
            Format::Json => json_document(&self.kind, &self.data),
            Format::Csv => match &self.table {
                Some(t) => t.clone(),
                None => flat_csv(&self.data),
            },
        }
    }
}

pub fn json_document(kind: &str, data: &Value) -> Vec<u8> {
    let doc = json!({ "v": SCHEMA_VERSION, "kind": kind, "data": data });
    let mut s = serde_json::to_string_pretty(&doc).expect("a Value always serializes");
    s.push('\n');
    s.into_bytes()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Number(n) => {
            let s = match (n.as_u64(), n.as_i64(), n.as_f64()) {
                (Some(u), _, _) => u.to_string(),
                (_, Some(i), _) => i.to_string(),
                (_, _, Some(f)) => fmt17(f),
                _ => n.to_string(),
            };
            out.push((prefix.to_string(), s));
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

/// Header of dotted field names and a single row of values.
pub fn flat_csv(v: &Value) -> Vec<u8> {
    let mut pairs = Vec::new();
    flatten("", v, &mut pairs);
    let (keys, vals): (Vec<String>, Vec<String>) = pairs.into_iter().unzip();
    format!("{}\n{}\n", keys.join(","), vals.join(",")).into_bytes()
}

pub fn write_out(path: Option<&Path>, bytes: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(bytes)?;
            w.flush()
        }
        None => {
            let mut w = io::stdout().lock();
            w.write_all(bytes)?;
            w.flush()
        }
    }
}

/// Parse a document and check its version; returns `(kind, data)`.
pub fn read_document(text: &str) -> Result<(String, Value), String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("not JSON: {e}"))?;
    let obj: &Map<String, Value> = doc.as_object().ok_or("top level is not an object")?;
    match obj.get("v").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        other => return Err(format!("unsupported schema version {other:?}")),
    }
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or("missing kind")?
        .to_string();
    let data = obj.get("data").cloned().ok_or("missing data")?;
    Ok((kind, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_csv_nests_with_dots() {
        let v = json!({"a": 1, "b": {"c": 0.5, "d": [true, "x"]}});
        let s = String::from_utf8(flat_csv(&v)).unwrap();
        assert_eq!(s, "a,b.c,b.d.0,b.d.1\n1,5.0000000000000000e-1,true,x\n");
    }

    #[test]
    fn version_is_checked() {
        assert!(read_document(r#"{"v":2,"kind":"split","data":{}}"#).is_err());
        assert!(read_document(r#"{"kind":"split","data":{}}"#).is_err());
        let (k, _) = read_document(r#"{"v":1,"kind":"split","data":{}}"#).unwrap();
        assert_eq!(k, "split");
    }
}
