use serde_json::Value;

use super::OutputFormat;

pub(super) fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        OutputFormat::Text => {
            let mut out = String::new();
            text(v, 0, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, x)| format!("{k}={}", scalar(x))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                if is_flat(x) {
                    out.push_str(&format!("{pad}{k:<width$}  {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}{k}\n"));
                    text(x, indent + 2, out);
                }
            }
        }
        Value::Array(rows) if rows.iter().all(Value::is_object) => table(rows, &pad, out),
        Value::Array(items) => {
            for x in items {
                out.push_str(&format!("{pad}{}\n", scalar(x)));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn table(rows: &[Value], pad: &str, out: &mut String) {
    let mut columns: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().expect("object rows").keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> =
        rows.iter().map(|r| columns.iter().map(|c| r.get(c).map(scalar).unwrap_or_default()).collect()).collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(&columns));
    for r in &cells {
        out.push_str(&line(r));
    }
}
