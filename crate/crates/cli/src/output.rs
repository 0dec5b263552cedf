use std::fmt::{self, Write as _};

use serde_json::Value;

/// Failures that abort a command before a report exists.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or polynomials: exit 2.
    Input(String),
    /// A computation gave up, e.g. on exhausted precision: exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

pub fn input<E: fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn failed<E: fmt::Display>(e: E) -> CliError {
    CliError::Failed(e.to_string())
}

/// A finished command: text and JSON renderings of the same data, and
/// whether every requested quantity came out determinate.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub determinate: bool,
}

impl Report {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.determinate {
            0
        } else {
            1
        }
    }
}

/// Line-oriented text builder.
#[derive(Debug, Default)]
pub struct Text(String);

impl Text {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
    }

    pub fn table(&mut self, header: &[String], rows: &[Vec<String>]) {
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let fmt_row = |cells: &[String]| {
            let mut out = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                let pad = w - cell.chars().count();
                let _ = write!(out, "{cell}{}", " ".repeat(pad));
            }
            out.trim_end().to_string()
        };
        self.line(fmt_row(header));
        self.line(
            widths
                .iter()
                .map(|w| "-".repeat(*w))
                .collect::<Vec<_>>()
                .join("-+-"),
        );
        for row in rows {
            self.line(fmt_row(row));
        }
    }

    pub fn finish(self) -> String {
        self.0
    }
}

/// `p^v`.
pub fn power(p: u64, v: i64) -> String {
    format!("{p}^{v}")
}
