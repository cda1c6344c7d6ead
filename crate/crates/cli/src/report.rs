//! The `{command, inputs, outputs, residuals, pass}` record and its renderings.

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub residuals: Map<String, Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), inputs: Map::new(), outputs: Map::new(), residuals: Map::new(), pass: true }
    }

    pub fn render(&self, format: Format) -> String {
        let value = serde_json::to_value(self).expect("report is plain data");
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("report is plain data");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut rows = vec!["key,value".to_string()];
                flatten(&value, String::new(), &mut |k, v| rows.push(format!("{},{}", csv_field(k), csv_field(v))));
                rows.join("\n") + "\n"
            }
            Format::Text => {
                let mut rows = Vec::new();
                flatten(&value, String::new(), &mut |k, v| rows.push(format!("{k} = {v}")));
                rows.join("\n") + "\n"
            }
        }
    }
}

/// Rounds to 15 significant digits so reports are stable across platforms;
/// non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // `+ 0.0` folds negative zero.
    let rounded: f64 = format!("{:.14e}", x + 0.0).parse().expect("formatted float parses");
    serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

/// Re-encodes every float inside a serialized value with [`num`].
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().expect("f64 number")),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn flatten(v: &Value, prefix: String, out: &mut dyn FnMut(&str, &str)) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(v, join(k), out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(v, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out(&prefix, s),
        other => out(&prefix, &other.to_string()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
