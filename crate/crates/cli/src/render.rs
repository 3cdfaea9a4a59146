// SPDX-License-Identifier: Apache-2.0

//! Plain-text rendering of JSON reports for `--human`.

use serde_json::Value;

fn is_family(value: &Value) -> bool {
    value.get("group").is_some() && value.get("blocks").is_some()
}

fn inline(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        v if is_family(v) => family(v),
        v => v.to_string(),
    }
}

fn element(value: &Value) -> String {
    match value {
        Value::Array(coords) => {
            let parts: Vec<String> = coords.iter().map(Value::to_string).collect();
            format!("({})", parts.join(","))
        }
        v => v.to_string(),
    }
}

fn family(value: &Value) -> String {
    let factors = value["group"]["factors"]
        .as_array()
        .map(|f| {
            f.iter()
                .map(|x| format!("Z{x}"))
                .collect::<Vec<_>>()
                .join(" x ")
        })
        .unwrap_or_default();
    let blocks = value["blocks"]
        .as_array()
        .map(|blocks| {
            blocks
                .iter()
                .map(|b| {
                    let items: Vec<String> = b
                        .as_array()
                        .map(|b| b.iter().map(element).collect())
                        .unwrap_or_default();
                    format!("{{{}}}", items.join(", "))
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default();
    format!("{factors}: {blocks}")
}

fn write(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) if !is_family(value) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                write(out, k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() && !is_family(v)) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for item in items {
                match item {
                    Value::Object(map) => {
                        let cells: Vec<String> = map
                            .iter()
                            .map(|(k, v)| format!("{k}={}", inline(v)))
                            .collect();
                        out.push_str(&format!("{pad}  - {}\n", cells.join("  ")));
                    }
                    v => out.push_str(&format!("{pad}  - {}\n", inline(v))),
                }
            }
        }
        v => out.push_str(&format!("{pad}{key:<20} {}\n", inline(v))),
    }
}

/// Renders a report as indented `key value` lines.
pub fn human(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                write(&mut out, k, v, 0);
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&human(item));
                out.push('\n');
            }
        }
        v => out.push_str(&format!("{}\n", inline(v))),
    }
    out
}
