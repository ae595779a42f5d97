//! Flat output records and their CSV / JSON / text forms.
//!
//! Floats are rounded to ten significant digits when a record is built, so
//! both serializations round-trip exactly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bound::BoundReport;
use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 10;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub m: f64,
    pub c: f64,
    pub potential: String,
    pub beta: f64,
    pub gamma: Option<f64>,
    #[serde(rename = "E_lower")]
    pub e_lower: f64,
    #[serde(rename = "E_reference")]
    pub e_reference: Option<f64>,
    pub k_cross: f64,
    pub cert_nodeless: bool,
    pub cert_monotone: bool,
    #[serde(rename = "cert_W_nonneg")]
    pub cert_w_nonneg: bool,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "m",
    "c",
    "potential",
    "beta",
    "gamma",
    "E_lower",
    "E_reference",
    "k_cross",
    "cert_nodeless",
    "cert_monotone",
    "cert_W_nonneg",
];

impl From<&BoundReport> for OutputRecord {
    fn from(r: &BoundReport) -> Self {
        Self {
            m: round_sig(r.problem.m),
            c: round_sig(r.problem.c),
            potential: r.problem.family.label(),
            beta: round_sig(r.beta),
            gamma: r.gamma.map(round_sig),
            e_lower: round_sig(r.e_lower),
            e_reference: r.e_reference.map(round_sig),
            k_cross: round_sig(r.k_cross),
            cert_nodeless: r.certification.nodeless(),
            cert_monotone: r.certification.monotone(),
            cert_w_nonneg: r.certification.w_nonnegative(),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

pub fn write_csv<W: Write>(records: &[OutputRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<OutputRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_error)
}

pub fn to_json(records: &[OutputRecord]) -> Result<String> {
    serde_json::to_string_pretty(records).map_err(|e| Error::InvalidInput(format!("json: {e}")))
}

pub fn from_json(s: &str) -> Result<Vec<OutputRecord>> {
    serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("json: {e}")))
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Fixed-width text table.
pub fn to_table(records: &[OutputRecord]) -> String {
    let mut rows = vec![CSV_COLUMNS.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for r in records {
        rows.push(vec![
            r.m.to_string(),
            r.c.to_string(),
            r.potential.clone(),
            r.beta.to_string(),
            cell(r.gamma),
            r.e_lower.to_string(),
            cell(r.e_reference),
            r.k_cross.to_string(),
            r.cert_nodeless.to_string(),
            r.cert_monotone.to_string(),
            r.cert_w_nonneg.to_string(),
        ]);
    }
    render_table(&rows)
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
