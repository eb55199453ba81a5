//! JSON envelopes and CSV rows.
//!
//! Every JSON document is `{"metadata": RunMetadata, "results": ...}` with
//! struct fields in declaration order. Floats use the shortest round-trip
//! decimal in both formats. `wall_time` is the only field that varies
//! between identical runs.

use serde::Serialize;

use crate::config::format_number;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    /// `None` for deterministic subcommands.
    pub seed: Option<u64>,
    pub rng_name: &'static str,
    pub artifact_version: &'static str,
    pub subcommand: &'static str,
    /// Seconds spent computing.
    pub wall_time: f64,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    metadata: &'a RunMetadata,
    results: &'a T,
}

pub fn to_json<T: Serialize>(metadata: &RunMetadata, results: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { metadata, results })?;
    s.push('\n');
    Ok(s)
}

/// The text of the `results` member of a document written by [`to_json`].
pub fn results_payload(json: &str) -> Option<&str> {
    json.find("\n  \"results\":").map(|i| &json[i..])
}

/// Comma-separated table with a fixed header.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    columns: usize,
}

pub enum Cell {
    Int(u64),
    Num(f64),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self {
            text,
            columns: header.len(),
        }
    }

    pub fn row<I: IntoIterator<Item = Cell>>(&mut self, cells: I) {
        let mut n = 0;
        for (i, c) in cells.into_iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match c {
                Cell::Int(v) => self.text.push_str(&v.to_string()),
                Cell::Num(v) => self.text.push_str(&format_number(v)),
            }
            n += 1;
        }
        debug_assert_eq!(n, self.columns, "CSV row width");
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
