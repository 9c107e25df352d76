use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::commands::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rendered command output and the exit status to report after writing it.
pub struct Output {
    pub body: String,
    pub status: u8,
}

impl Output {
    pub fn ok(body: String) -> Self {
        Output { body, status: 0 }
    }
}

/// Tabular view shared by the CSV and text renderers.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// `key: value` lines for a single row, padded columns otherwise.
    pub fn text(&self) -> String {
        let mut out = String::new();
        if self.rows.len() == 1 {
            let width = self
                .header
                .iter()
                .map(|h| h.chars().count())
                .max()
                .unwrap_or(0);
            for (h, v) in self.header.iter().zip(&self.rows[0]) {
                out.push_str(&format!("{h:<width$}  {v}\n"));
            }
            return out;
        }
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                std::iter::once(&self.header[c])
                    .chain(self.rows.iter().map(|r| &r[c]))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// One compact JSON document per line.
pub fn json_lines<T: Serialize>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| serde_json::to_string(v).expect("serializable report") + "\n")
        .collect()
}

pub fn render<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> Table) -> String {
    match format {
        Format::Json => json(value),
        Format::Csv => table().csv(),
        Format::Text => table().text(),
    }
}

pub fn emit(out: &Output, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, &out.body)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::config(format!("cannot write stdout: {e}")))
        }
    }
}
