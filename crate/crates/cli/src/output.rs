use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;

/// A finished report: the JSON document plus, for reports that are at heart
/// a list of pairs, the rows used for CSV output.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: Value,
    pub table: Option<Table>,
    /// False when a comparison inside the report failed.
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn pairs<A: ToString, B: ToString>(h: [&str; 2], rows: impl IntoIterator<Item = (A, B)>) -> Self {
        Table {
            headers: h.iter().map(|s| s.to_string()).collect(),
            rows: rows.into_iter().map(|(a, b)| vec![a.to_string(), b.to_string()]).collect(),
        }
    }
}

impl Report {
    pub fn new(body: Value) -> Self {
        Report { body, table: None, ok: true }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.body).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let table = self.table.clone().unwrap_or_else(|| Table {
            headers: vec!["key".into(), "value".into()],
            rows: flatten(&self.body),
        });
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.headers).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(map) = &self.body {
            for (k, v) in map {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {shown}\n"));
            }
        } else {
            out.push_str(&self.body.to_string());
            out.push('\n');
        }
        out
    }
}

/// `key,value` rows for every scalar leaf, nested keys joined with dots.
fn flatten(v: &Value) -> Vec<Vec<String>> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
            other => out.push(vec![prefix.to_string(), other.to_string()]),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> std::io::Result<()> {
    let text = report.render(format);
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Integers that may exceed 64 bits are written as strings.
pub fn big(v: i128) -> Value {
    i64::try_from(v).map(Value::from).unwrap_or_else(|_| Value::String(v.to_string()))
}

pub fn object(pairs: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(pairs.into_iter().collect::<Map<_, _>>())
}
