use serde_json::{json, Map, Value};

use crate::exact::{format_rational, Q};

pub const SCHEMA: &str = "1";

/// Round to 15 significant digits; the JSON writer then prints at most 15.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(round15(x))
    } else {
        Value::String(x.to_string())
    }
}

pub fn rational(x: &Q) -> Value {
    Value::String(format_rational(x))
}

/// `{"schema": "1", "command": ..., ...fields}`.
pub fn envelope(command: &str, fields: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    if let Value::Object(extra) = fields {
        m.extend(extra);
    }
    Value::Object(m)
}

pub fn error(err: &crate::Error) -> Value {
    let kind = match err {
        crate::Error::Parse { .. } => "parse",
        crate::Error::Domain(_) => "domain",
        crate::Error::Resource(_) => "resource",
        crate::Error::Numeric(_) => "numeric",
        crate::Error::Diagnostics(_) => "diagnostics",
        crate::Error::Io(_) => "io",
    };
    let mut v = json!({
        "schema": SCHEMA,
        "error": {"kind": kind, "message": err.to_string(), "exit_code": err.exit_code()},
    });
    if let crate::Error::Parse { offset, .. } = err {
        v["error"]["offset"] = json!(offset);
    }
    v
}
