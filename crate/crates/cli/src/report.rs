use std::time::Duration;

use clap::ValueEnum;
use ddseries::EvalResult;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn complex(z: Complex64) -> Value {
    // adding 0.0 turns -0.0 into 0.0
    json!({ "re": z.re + 0.0, "im": z.im + 0.0 })
}

/// Output document of one command: the echoed input followed by results.
#[derive(Debug)]
pub struct Report {
    format: Format,
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(input: Map<String, Value>, format: Format) -> Self {
        let mut fields = Map::new();
        fields.insert("input".into(), Value::Object(input));
        Report { format, fields }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn eval_result(&mut self, r: &EvalResult) {
        self.set("value", complex(r.value));
        self.set("tail_estimate", json!(r.tail_estimate));
        self.set("method", json!(r.method.name()));
        self.set("terms_used", json!(r.terms_used));
        self.set(
            "nearest_pole",
            match r.nearest_pole {
                Some(p) => json!({ "m": p.point.m, "k": p.point.k, "distance": p.distance }),
                None => Value::Null,
            },
        );
    }

    pub fn set_wall_time(&mut self, elapsed: Duration) {
        self.set("wall_time_ms", json!(elapsed.as_secs_f64() * 1e3));
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Json => serde_json::to_string_pretty(&self.fields).expect("report is valid JSON"),
            Format::Text => {
                let mut out = String::new();
                for (key, value) in &self.fields {
                    text_field(&mut out, key, value, 0);
                }
                out.truncate(out.trim_end().len());
                out
            }
        }
    }
}

fn text_field(out: &mut String, key: &str, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) if is_complex(map) => {
            out.push_str(&format!("{pad}{key}: {}\n", text_scalar(value)));
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                text_field(out, k, v, indent + 1);
            }
        }
        Value::Array(items) if items.iter().any(|v| matches!(v, Value::Object(m) if !is_complex(m))) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                text_field(out, &format!("[{i}]"), item, indent + 1);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(text_scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        _ => out.push_str(&format!("{pad}{key}: {}\n", text_scalar(value))),
    }
}

fn is_complex(map: &Map<String, Value>) -> bool {
    map.len() == 2 && map.contains_key("re") && map.contains_key("im")
}

fn text_scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Object(map) if is_complex(map) => {
            let re = map["re"].as_f64().unwrap_or(f64::NAN);
            let im = map["im"].as_f64().unwrap_or(f64::NAN);
            format!("{re:.16e} {im:+.16e}i")
        }
        other => other.to_string(),
    }
}
