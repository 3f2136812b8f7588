use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result in all three renderings.
pub struct Output {
    pub json: Value,
    pub rows: Vec<Vec<String>>,
    pub text: String,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .flexible(true)
                    .from_writer(Vec::new());
                for row in &self.rows {
                    w.write_record(row).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
            }
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let body = self.render(format);
        match out {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().lock().write_all(body.as_bytes()),
        }
    }
}
