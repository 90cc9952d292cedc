//! Plain-text rendering of a JSON report: nested keys become indented
//! lines, arrays of scalars stay on one line.

use serde_json::Value;
use std::fmt::Write;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object()) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn walk(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) if !s.contains('\n') => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    Some(s) => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        for line in s.lines() {
                            writeln!(out, "{pad}  {line}").unwrap();
                        }
                    }
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        walk(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        // first line of the nested block goes on the dash line
                        let mut inner = String::new();
                        walk(&mut inner, x, depth + 1);
                        let body = inner.strip_prefix(&format!("{pad}  ")).unwrap_or(&inner);
                        write!(out, "{pad}- {body}").unwrap();
                    }
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}
