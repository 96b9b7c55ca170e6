use std::io::{self, Write};

use serde_json::Value;

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "1";

/// A rectangular block of text cells for the csv and pretty renderers.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, header: Vec<String>) -> Self {
        Table {
            title: title.into(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub fn document(command: &str, inputs: Value, payload: Value) -> Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "payload": payload,
    })
}

/// Pretty JSON with keys in sorted order, newline terminated.
pub fn json_text(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("a Value always serializes");
    s.push('\n');
    s
}

pub fn csv_text(tables: &[Table]) -> io::Result<String> {
    let mut out = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push(b'\n');
        }
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(&mut out);
        w.write_record(&t.header)?;
        for r in &t.rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(out).expect("csv output is utf-8"))
}

pub fn pretty_text(tables: &[Table]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if !t.title.is_empty() {
            out.push_str(&t.title);
            out.push('\n');
        }
        let ncols = t.rows.iter().map(Vec::len).chain([t.header.len()]).max().unwrap_or(0);
        let mut widths = vec![0; ncols];
        for r in std::iter::once(&t.header).chain(&t.rows) {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for r in std::iter::once(&t.header).chain(&t.rows) {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:>w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
    }
    out
}

pub fn emit(format: Format, doc: &Value, tables: &[Table]) -> io::Result<()> {
    let text = match format {
        Format::Json => json_text(doc),
        Format::Csv => csv_text(tables)?,
        Format::Pretty => pretty_text(tables),
    };
    let mut stdout = io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()
}
