//! Deterministic report rendering: a small ordered JSON document model and a
//! CSV row writer, both byte-stable for fixed inputs.

use std::fmt::Write as _;

/// JSON value with insertion-ordered object keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i128),
    UInt(u128),
    /// Rendered with 12 significant digits; non-finite values become strings.
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object() -> Json {
        Json::Object(Vec::new())
    }

    /// Append a key; panics on non-objects (internal misuse, not input).
    pub fn push(&mut self, key: &str, value: Json) {
        match self {
            Json::Object(entries) => entries.push((key.to_string(), value)),
            _ => panic!("push on non-object"),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(v) => {
                let _ = write!(out, "{}", v);
            }
            Json::UInt(v) => {
                let _ = write!(out, "{}", v);
            }
            Json::Float(v) => out.push_str(&format_number(*v)),
            Json::Str(s) => write_json_string(out, s),
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Object(entries) => {
                if entries.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_json_string(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// 12 significant digits in scientific notation; exact "0" for zero;
/// "inf"/"-inf"/"nan" rendered as JSON strings.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "\"nan\"".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "\"inf\"".into() } else { "\"-inf\"".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    format!("{:.11e}", v)
}

/// A probability field value plus its companion log field.
pub fn probability_pair(p: f64) -> (Json, Json) {
    let log = if p == 0.0 {
        Json::Str("-inf".into())
    } else {
        Json::Float(p.ln())
    };
    (Json::Float(p), log)
}

/// A log-probability field plus the companion plain-probability field.
pub fn log_probability_pair(log_p: f64) -> (Json, Json) {
    let log = if log_p == f64::NEG_INFINITY {
        Json::Str("-inf".into())
    } else {
        Json::Float(log_p)
    };
    (log, Json::Float(log_p.exp()))
}

/// One CSV cell: numbers in the JSON rendering minus string quotes.
pub fn csv_cell(v: &Json) -> String {
    match v {
        Json::Null => String::new(),
        Json::Bool(b) => b.to_string(),
        Json::Int(i) => i.to_string(),
        Json::UInt(u) => u.to_string(),
        Json::Float(f) => format_number(*f).trim_matches('"').to_string(),
        Json::Str(s) => s.clone(),
        _ => panic!("nested value in CSV cell"),
    }
}

pub fn csv_line(cells: &[Json]) -> String {
    cells.iter().map(csv_cell).collect::<Vec<_>>().join(",")
}
