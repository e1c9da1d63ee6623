//! Report document and plain-text rendering.

use std::fmt::Write as _;

use rga_core::{GainMatrix, Matrix};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::input::InputInfo;

pub const SCHEMA: &str = "rga-kit.report/1";
pub const DEFAULT_PRECISION: usize = 4;

#[derive(Debug, Serialize)]
pub struct ReportDocument<P, R> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    pub parameters: P,
    pub results: R,
    pub notes: Vec<String>,
}

impl<P: Serialize, R: Serialize> ReportDocument<P, R> {
    pub fn new(command: &'static str, input: Option<InputInfo>, parameters: P, results: R) -> Self {
        ReportDocument {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            input,
            parameters,
            results,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Decimal places for tables; `RGA_KIT_PRECISION` overrides the default.
pub fn precision() -> Result<usize> {
    match std::env::var("RGA_KIT_PRECISION") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(p) if p <= 17 => Ok(p),
            _ => Err(CliError::Usage(format!(
                "RGA_KIT_PRECISION must be an integer between 0 and 17, got '{v}'"
            ))),
        },
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

pub fn output_label(g: &GainMatrix, i: usize) -> String {
    g.row_labels
        .as_ref()
        .map_or_else(|| format!("y{}", i + 1), |l| l[i].clone())
}

pub fn input_label(g: &GainMatrix, j: usize) -> String {
    g.col_labels
        .as_ref()
        .map_or_else(|| format!("u{}", j + 1), |l| l[j].clone())
}

fn with_unit(label: String, units: &Option<Vec<String>>, k: usize) -> String {
    match units.as_ref().map(|u| u[k].as_str()) {
        Some(u) if !u.is_empty() => format!("{label}[{u}]"),
        _ => label,
    }
}

/// Aligned matrix with output labels down the side and input labels across.
pub fn matrix_table(values: &Matrix, meta: &GainMatrix, prec: usize) -> String {
    let (m, n) = values.shape();
    let side: Vec<String> = (0..m)
        .map(|i| with_unit(output_label(meta, i), &meta.row_units, i))
        .collect();
    let head: Vec<String> = (0..n)
        .map(|j| with_unit(input_label(meta, j), &meta.col_units, j))
        .collect();
    let cells: Vec<Vec<String>> = (0..m)
        .map(|i| (0..n).map(|j| fixed(values.get(i, j), prec)).collect())
        .collect();
    let side_w = side.iter().map(String::len).max().unwrap_or(0);
    let col_w: Vec<usize> = (0..n)
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].len())
                .chain(std::iter::once(head[j].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:side_w$}", "");
    for (j, h) in head.iter().enumerate() {
        let _ = write!(out, "  {:>w$}", h, w = col_w[j]);
    }
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        let _ = write!(out, "{:<side_w$}", side[i]);
        for (j, c) in row.iter().enumerate() {
            let _ = write!(out, "  {:>w$}", c, w = col_w[j]);
        }
        out.push('\n');
    }
    out
}

fn header_line(tag: &str, labels: &Option<Vec<String>>, units: &Option<Vec<String>>, len: usize) -> Option<String> {
    if labels.is_none() && units.is_none() {
        return None;
    }
    let default = if tag == "rows" { "y" } else { "u" };
    let toks: Vec<String> = (0..len)
        .map(|k| {
            let name = labels
                .as_ref()
                .map_or_else(|| format!("{default}{}", k + 1), |l| l[k].clone());
            with_unit(name, units, k)
        })
        .collect();
    Some(format!("#{tag}: {}\n", toks.join(", ")))
}

/// CSV that reads back through the CSV input path, metadata included.
/// Values keep full precision.
pub fn matrix_csv(values: &Matrix, meta: &GainMatrix, comments: &[String]) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let (m, n) = values.shape();
    if let Some(h) = header_line("rows", &meta.row_labels, &meta.row_units, m) {
        out.push_str(&h);
    }
    if let Some(h) = header_line("cols", &meta.col_labels, &meta.col_units, n) {
        out.push_str(&h);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for i in 0..m {
        w.write_record(values.row(i).iter().map(|v| v.to_string()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

/// Fixed-point text without a sign on values that round to zero.
pub fn fixed(v: f64, prec: usize) -> String {
    let s = format!("{v:.prec$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn list(values: &[f64], prec: usize) -> String {
    let cells: Vec<String> = values.iter().map(|v| fixed(*v, prec)).collect();
    format!("[{}]", cells.join(", "))
}
