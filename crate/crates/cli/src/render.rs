//! JSON, CSV and aligned-text output.

use serde::Serialize;

use crate::config::OutputFormat;
use lame_core::{Error, Result};

/// Rows for the CSV and text renderings.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub trait Render: Serialize {
    fn table(&self) -> Table;

    /// Extra lines printed under the text table.
    fn footer(&self) -> Vec<String> {
        Vec::new()
    }
}

pub fn render<T: Render>(value: &T, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Error::InvalidInput(e.to_string()))
        }
        OutputFormat::Csv => {
            let t = value.table();
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidInput(e.to_string());
            w.write_record(&t.headers).map_err(io)?;
            for row in &t.rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
        }
        OutputFormat::Text => {
            let t = value.table();
            let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = if t.rows.is_empty() { String::new() } else { line(t.headers.clone()) };
            for row in &t.rows {
                out += &line(row.iter().map(String::as_str).collect());
            }
            for f in value.footer() {
                out += &f;
                out.push('\n');
            }
            Ok(out)
        }
    }
}
