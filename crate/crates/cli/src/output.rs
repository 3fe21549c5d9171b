use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("HLAWKA_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    /// Explicit choice, else inferred from the output file extension, else JSON.
    pub fn resolve(explicit: Option<Format>, out: Option<&Path>) -> Format {
        explicit.unwrap_or_else(|| match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("txt") => Format::Table,
            _ => Format::Json,
        })
    }
}

/// Result of one command: a structured value, optional sweep rows, and the exit code.
pub struct Output {
    pub value: Value,
    pub rows: Option<(String, Vec<String>)>,
    pub seed: Option<u64>,
    pub exit: i32,
}

impl Output {
    pub fn new<T: Serialize>(v: &T) -> Self {
        Output { value: serde_json::to_value(v).expect("serializable report"), rows: None, seed: None, exit: 0 }
    }

    pub fn rows(mut self, header: &str, rows: Vec<String>) -> Self {
        self.rows = Some((header.to_string(), rows));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn exit(mut self, code: i32) -> Self {
        self.exit = code;
        self
    }

    pub fn render(&self, command: &str, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({
                    "version": VERSION,
                    "command": command,
                    "seed": self.seed,
                    "result": self.value,
                });
                serde_json::to_string_pretty(&doc).expect("json") + "\n"
            }
            Format::Csv => {
                let mut s = format!("# version: {VERSION}\n# command: {command}\n");
                if let Some(seed) = self.seed {
                    s += &format!("# seed: {seed}\n");
                }
                match &self.rows {
                    Some((header, rows)) => {
                        s += header;
                        s.push('\n');
                        for r in rows {
                            s += r;
                            s.push('\n');
                        }
                    }
                    None => {
                        let flat = flatten(&self.value);
                        s += &flat.iter().map(|(k, _)| csv_field(k)).collect::<Vec<_>>().join(",");
                        s.push('\n');
                        s += &flat.iter().map(|(_, v)| csv_field(v)).collect::<Vec<_>>().join(",");
                        s.push('\n');
                    }
                }
                s
            }
            Format::Table => {
                let mut s = format!("version: {VERSION}\ncommand: {command}\n");
                if let Some(seed) = self.seed {
                    s += &format!("seed: {seed}\n");
                }
                match &self.rows {
                    Some((header, rows)) => {
                        let table: Vec<Vec<String>> =
                            std::iter::once(header.as_str()).chain(rows.iter().map(String::as_str)).map(split_csv).collect();
                        let cols = table.iter().map(Vec::len).max().unwrap_or(0);
                        let widths: Vec<usize> =
                            (0..cols).map(|c| table.iter().filter_map(|r| r.get(c)).map(|x| x.len()).max().unwrap_or(0)).collect();
                        for r in &table {
                            let line: Vec<String> = r.iter().enumerate().map(|(c, x)| format!("{x:>w$}", w = widths[c])).collect();
                            s += line.join("  ").trim_end();
                            s.push('\n');
                        }
                    }
                    None => {
                        let flat = flatten(&self.value);
                        let w = flat.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                        for (k, v) in flat {
                            s += &format!("{k:<w$}  {v}\n");
                        }
                    }
                }
                s
            }
        }
    }
}

/// Splits one CSV line, honouring double quotes.
fn split_csv(line: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                chars.next();
                out.last_mut().unwrap().push('"');
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(String::new()),
            _ => out.last_mut().unwrap().push(c),
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Flat `key.sub` → scalar text; arrays of scalars are joined with `;`,
/// deeper structures are kept as compact JSON.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                walk(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            let text = parts.map_or_else(|| v.to_string(), |p| p.join(";"));
            out.push((prefix.to_string(), text));
        }
        _ => out.push((prefix.to_string(), scalar(v).unwrap_or_default())),
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattening() {
        let v = json!({"a": 1, "b": {"c": [1, 2], "d": null}, "e": [{"x": 1}]});
        let f = flatten(&v);
        assert_eq!(
            f,
            vec![
                ("a".into(), "1".into()),
                ("b.c".into(), "1;2".into()),
                ("b.d".into(), "".into()),
                ("e".into(), "[{\"x\":1}]".into())
            ]
        );
    }

    #[test]
    fn csv_quotes() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(split_csv("x,\"a,b\",\"q\"\"\""), vec!["x", "a,b", "q\""]);
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn format_inference() {
        assert_eq!(Format::resolve(None, Some(Path::new("t.csv"))), Format::Csv);
        assert_eq!(Format::resolve(None, None), Format::Json);
        assert_eq!(Format::resolve(Some(Format::Table), Some(Path::new("t.csv"))), Format::Table);
    }
}
