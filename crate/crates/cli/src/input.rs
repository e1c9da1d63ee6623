//! Loading plants from CSV, JSON, transfer-function text or bundled fixtures.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rga_core::fixtures::{self, FixtureData};
use rga_core::tf::{self, TransferMatrix};
use rga_core::{GainMatrix, Matrix};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Json,
    Tf,
}

impl InputFormat {
    fn from_extension(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(InputFormat::Csv),
            "json" => Some(InputFormat::Json),
            "tf" | "txt" | "dsl" => Some(InputFormat::Tf),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub format: InputFormat,
    pub sha256: String,
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub gain: GainMatrix,
    pub transfer: Option<TransferMatrix>,
    pub info: InputInfo,
    pub fixture_note: Option<String>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load(path: Option<&PathBuf>, fixture: Option<&str>, format: Option<InputFormat>) -> Result<Loaded> {
    match (path, fixture) {
        (Some(p), None) => load_file(p, format),
        (None, Some(name)) => load_fixture(name),
        _ => Err(CliError::Usage(
            "give exactly one of an input path or --fixture NAME".into(),
        )),
    }
}

fn load_fixture(name: &str) -> Result<Loaded> {
    let f = fixtures::get(name)?;
    let (bytes, format, transfer) = match &f.data {
        FixtureData::TransferFunction { text } => {
            (text.as_bytes().to_vec(), InputFormat::Tf, Some(tf::parse(text)?))
        }
        FixtureData::Matrix { gain } => (
            serde_json::to_vec(gain).expect("gain matrices serialize"),
            InputFormat::Json,
            None,
        ),
    };
    Ok(Loaded {
        gain: f.gain()?,
        transfer,
        info: InputInfo {
            source: format!("fixture:{}", f.name),
            format,
            sha256: digest(&bytes),
        },
        fixture_note: Some(format!("fixture {}: {}", f.name, f.description)),
    })
}

fn load_file(path: &Path, format: Option<InputFormat>) -> Result<Loaded> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let shown = path.display().to_string();
    let format = format
        .or_else(|| InputFormat::from_extension(path))
        .ok_or_else(|| {
            CliError::Usage(format!(
                "cannot infer the format of {shown}; pass --input-format csv|json|tf"
            ))
        })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Format {
        path: shown.clone(),
        message: "input is not valid UTF-8".into(),
    })?;
    let (gain, transfer) = match format {
        InputFormat::Csv => (parse_csv(&text, &shown)?, None),
        InputFormat::Json => {
            let g: GainMatrix = serde_json::from_str(&text).map_err(|e| CliError::Format {
                path: shown.clone(),
                message: e.to_string(),
            })?;
            g.validate()?;
            (g, None)
        }
        InputFormat::Tf => {
            let tm = tf::parse(&text)?;
            (tf::steady_state(&tm)?, Some(tm))
        }
    };
    Ok(Loaded {
        gain,
        transfer,
        info: InputInfo {
            source: shown,
            format,
            sha256: digest(&bytes),
        },
        fixture_note: None,
    })
}

/// Splits `name[unit]` tokens into labels and (if any carry one) units.
pub fn parse_header(list: &str) -> (Vec<String>, Option<Vec<String>>) {
    let mut labels = Vec::new();
    let mut units = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.find('[') {
            Some(k) if tok.ends_with(']') => {
                labels.push(tok[..k].trim().to_string());
                units.push(tok[k + 1..tok.len() - 1].trim().to_string());
            }
            _ => {
                labels.push(tok.to_string());
                units.push(String::new());
            }
        }
    }
    let any_unit = units.iter().any(|u| !u.is_empty());
    (labels, any_unit.then_some(units))
}

/// Comma-separated rows. `#rows:` and `#cols:` comment lines carry
/// `name[unit]` metadata; other `#` lines are ignored.
pub fn parse_csv(text: &str, shown: &str) -> Result<GainMatrix> {
    let bad = |message: String| CliError::Format {
        path: shown.to_string(),
        message,
    };
    let mut row_meta = None;
    let mut col_meta = None;
    for line in text.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("#rows:") {
            row_meta = Some(parse_header(rest));
        } else if let Some(rest) = t.strip_prefix("#cols:") {
            col_meta = Some(parse_header(rest));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(k + 1, |p| p.line() as usize);
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    bad(format!("line {line}, field {}: '{cell}' is not a number", j + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(bad(format!(
                    "line {line} has {} fields, expected {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no matrix rows found".into()));
    }
    let mut g = GainMatrix::new(Matrix::from_rows(&rows)?);
    if let Some((labels, units)) = row_meta {
        g.row_labels = Some(labels);
        g.row_units = units;
    }
    if let Some((labels, units)) = col_meta {
        g.col_labels = Some(labels);
        g.col_units = units;
    }
    g.validate()?;
    Ok(g)
}
