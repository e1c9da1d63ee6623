//! Transfer-function matrices: a small text DSL for rational entries in `s`
//! with dead time, plus steady-state and complex evaluation.
//!
//! A matrix file looks like
//!
//! ```text
//! # comment
//! inputs:  u1[degC], u2[%]
//! outputs: y1[degC]
//! 3.8(16s+1)/(140s^2+14s+1) & 2.9e^{-6s}/(10s+1) \\
//! ```
//!
//! Entries are separated by `&` or `,`; rows by `\\` or newlines.

mod parser;
mod poly;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use poly::Polynomial;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rga::GainMatrix;

/// `gain * num(s) / den(s) * exp(-delay * s)`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfEntry {
    pub gain: f64,
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub delay: f64,
}

impl TfEntry {
    /// Zero numerators collapse to the canonical zero entry.
    pub fn new(gain: f64, numerator: Polynomial, denominator: Polynomial, delay: f64) -> Self {
        if gain == 0.0 || numerator.is_zero() {
            return TfEntry::zero();
        }
        TfEntry {
            gain,
            numerator,
            denominator,
            delay,
        }
    }

    pub fn zero() -> Self {
        TfEntry {
            gain: 0.0,
            numerator: Polynomial::one(),
            denominator: Polynomial::one(),
            delay: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gain == 0.0
    }

    pub fn steady_state(&self) -> Option<f64> {
        if self.is_zero() {
            return Some(0.0);
        }
        let d = self.denominator.constant_term();
        if d == 0.0 {
            return None;
        }
        Some(self.gain * (self.numerator.constant_term() / d))
    }

    pub fn evaluate(&self, s: Complex64) -> Option<Complex64> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        let num = self.numerator.eval(s);
        let den = self.denominator.eval(s);
        if den == Complex64::new(0.0, 0.0) {
            return None;
        }
        // real denominators divide componentwise so s = 0 reproduces the
        // steady-state arithmetic bit for bit
        let ratio = if den.im == 0.0 {
            Complex64::new(num.re / den.re, num.im / den.re)
        } else {
            num / den
        };
        let value = Complex64::new(self.gain, 0.0) * ratio;
        if self.delay == 0.0 {
            Some(value)
        } else {
            Some(value * (-self.delay * s).exp())
        }
    }
}

impl fmt::Display for TfEntry {
    /// Canonical DSL text; parses back to an equal entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.gain != 1.0 || self.numerator.is_one() {
            parts.push(format!("{}", self.gain));
        }
        if !self.numerator.is_one() {
            parts.push(self.numerator.to_string());
        }
        if self.delay != 0.0 {
            parts.push(format!("exp(-{}s)", self.delay));
        }
        f.write_str(&parts.join("*"))?;
        if !self.denominator.is_one() {
            write!(f, "/{}", self.denominator)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub entries: Vec<Vec<TfEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_units: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_units: Option<Vec<String>>,
}

impl TransferMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.rows(), self.cols());
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("transfer matrix is empty".into()));
        }
        if let Some(k) = self.entries.iter().position(|r| r.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{n} entries per row"),
                actual: format!("{} entries in row {}", self.entries[k].len(), k + 1),
            });
        }
        let checks = [
            ("output labels", &self.row_labels, m),
            ("input labels", &self.col_labels, n),
            ("output units", &self.row_units, m),
            ("input units", &self.col_units, n),
        ];
        for (what, v, len) in checks {
            if let Some(v) = v {
                if v.len() != len {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{len} {what}"),
                        actual: format!("{} {what}", v.len()),
                    });
                }
            }
        }
        Ok(())
    }

    /// Canonical DSL text including headers; reparses to an equal matrix.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let header = |labels: &Option<Vec<String>>, units: &Option<Vec<String>>, n: usize| {
            if labels.is_none() && units.is_none() {
                return None;
            }
            let toks: Vec<String> = (0..n)
                .map(|k| {
                    let name = labels
                        .as_ref()
                        .map_or_else(|| format!("v{}", k + 1), |l| l[k].clone());
                    match units {
                        Some(u) => format!("{name}[{}]", u[k]),
                        None => name,
                    }
                })
                .collect();
            Some(toks.join(", "))
        };
        if let Some(h) = header(&self.col_labels, &self.col_units, self.cols()) {
            out.push_str(&format!("inputs: {h}\n"));
        }
        if let Some(h) = header(&self.row_labels, &self.row_units, self.rows()) {
            out.push_str(&format!("outputs: {h}\n"));
        }
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&cells.join(" & "));
            out.push('\n');
        }
        out
    }
}

pub fn parse_entry(text: &str) -> Result<TfEntry> {
    parser::parse_entry_at(text, 1, 1)
}

pub fn parse(text: &str) -> Result<TransferMatrix> {
    parser::parse_matrix(text)
}

/// Gain matrix `G(0)`; dead-time factors are 1 at `s = 0`.
pub fn steady_state(tm: &TransferMatrix) -> Result<GainMatrix> {
    tm.validate()?;
    let (m, n) = (tm.rows(), tm.cols());
    let mut entries = Vec::with_capacity(m * n);
    for (i, row) in tm.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            entries.push(
                e.steady_state()
                    .ok_or(Error::ZeroDenominator { row: i + 1, col: j + 1 })?,
            );
        }
    }
    Ok(GainMatrix {
        matrix: Matrix::new(m, n, entries)?,
        row_labels: tm.row_labels.clone(),
        col_labels: tm.col_labels.clone(),
        row_units: tm.row_units.clone(),
        col_units: tm.col_units.clone(),
    })
}

/// Entrywise complex evaluation at `s`.
pub fn evaluate(tm: &TransferMatrix, s: Complex64) -> Result<Vec<Vec<Complex64>>> {
    tm.validate()?;
    tm.entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, e)| e.evaluate(s).ok_or(Error::Pole { row: i + 1, col: j + 1 }))
                .collect()
        })
        .collect()
}
