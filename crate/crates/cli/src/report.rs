//! JSON report envelope and the text rendering.

use serde_json::{Map, Number, Value};

use crate::error::CliError;

pub const SCHEMA: &str = "fidelity-lab/1";

/// Significant digits kept for every number in a report.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Wraps a command payload with the schema tag and command name.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), Value::from(SCHEMA));
    map.insert("command".into(), Value::from(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    } else {
        map.insert("result".into(), body);
    }
    Value::Object(map)
}

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation reparses")
}

/// Rounds every float to [`SIGNIFICANT_DIGITS`].
///
/// `serde_json` turns NaN and infinities into `null`, and reports never carry
/// a legitimate `null`, so any `null` is rejected as a non-finite number.
pub fn normalize(value: Value) -> Result<Value, CliError> {
    normalize_at(value, "$")
}

fn normalize_at(value: Value, path: &str) -> Result<Value, CliError> {
    Ok(match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            Value::Number(Number::from_f64(round_significant(x)).expect("rounded finite"))
        }
        Value::Null => return Err(CliError::Invariant(format!("non-finite number at {path}"))),
        Value::Array(items) => Value::Array(
            items
                .into_iter()
                .enumerate()
                .map(|(i, v)| normalize_at(v, &format!("{path}[{i}]")))
                .collect::<Result<_, _>>()?,
        ),
        Value::Object(fields) => Value::Object(
            fields
                .into_iter()
                .map(|(k, v)| {
                    let child = format!("{path}.{k}");
                    normalize_at(v, &child).map(|v| (k, v))
                })
                .collect::<Result<_, _>>()?,
        ),
        other => other,
    })
}

/// One `path: value` line per scalar; matrices collapse to their shape.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, "", &mut out);
    out
}

fn render_into(value: &Value, path: &str, out: &mut String) {
    match value {
        Value::Object(fields) => {
            if let (Some(r), Some(c), Some(_)) =
                (fields.get("rows"), fields.get("cols"), fields.get("data"))
            {
                out.push_str(&format!("{path}: <{r}x{c} matrix>\n"));
                return;
            }
            for (k, v) in fields {
                let child = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                render_into(v, &child, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                render_into(v, &format!("{path}[{i}]"), out);
            }
        }
        v => out.push_str(&format!("{path}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
