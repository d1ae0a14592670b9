//! Table and JSON rendering of payloads.

use serde_json::Value;

/// Canonical JSON: compact, keys sorted (serde_json maps are ordered).
pub fn json(v: &Value) -> String {
    v.to_string()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> String {
    if let Some(s) = scalar(v) {
        return s;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
            format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(","))
        }
        other => other.to_string(),
    }
}

fn is_flat_rows(v: &Value) -> bool {
    match v {
        Value::Array(items) => {
            !items.is_empty()
                && items.iter().all(|x| x.as_object().is_some_and(|o| o.values().all(|y| scalar(y).is_some())))
        }
        _ => false,
    }
}

fn aligned(rows: &[Vec<String>], indent: &str) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| if c + 1 == r.len() { s.clone() } else { format!("{s:<w$}", w = widths[c]) })
            .collect();
        out.push_str(indent);
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out
}

/// `key: value` lines with aligned values; arrays of flat records become
/// indented sub-tables.
pub fn table(v: &Value) -> String {
    let Some(obj) = v.as_object() else {
        return format!("{}\n", inline(v));
    };
    let mut simple = Vec::new();
    let mut nested = Vec::new();
    for (k, val) in obj {
        if is_flat_rows(val) {
            nested.push((k, val));
        } else {
            simple.push(vec![format!("{k}:"), inline(val)]);
        }
    }
    let mut out = aligned(&simple, "");
    for (k, val) in nested {
        let items = val.as_array().expect("checked array");
        let mut headers: Vec<String> = Vec::new();
        for item in items {
            for key in item.as_object().expect("checked object").keys() {
                if !headers.contains(key) {
                    headers.push(key.clone());
                }
            }
        }
        let mut rows = vec![headers.clone()];
        for item in items {
            rows.push(headers.iter().map(|h| item.get(h).and_then(scalar).unwrap_or_default()).collect());
        }
        out.push_str(&format!("{k}:\n"));
        out.push_str(&aligned(&rows, "  "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalar_arrays_render_inline() {
        let t = table(&json!({ "integer_roots": ["-1", "0", "1"], "determinant": "t^4 - t^2", "all_integer": true }));
        assert!(t.contains("integer_roots:  [-1,0,1]"));
        assert!(t.contains("determinant:    t^4 - t^2"));
        assert!(t.contains("all_integer:    true"));
    }

    #[test]
    fn records_become_aligned_columns() {
        let t = table(&json!({ "rows": [{ "a": 1, "bb": "x" }, { "a": 100, "bb": "yy" }] }));
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines, ["rows:", "  a    bb", "  1    x", "  100  yy"]);
    }

    #[test]
    fn json_keys_are_sorted() {
        let v: Value = serde_json::from_str(r#"{"b":1,"a":{"d":2,"c":3}}"#).unwrap();
        assert_eq!(json(&v), r#"{"a":{"c":3,"d":2},"b":1}"#);
    }
}
