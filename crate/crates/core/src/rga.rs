//! Relative gain arrays under a selectable generalized inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exact_inverse, hadamard, mp_pinv_with_rank, Matrix};
use crate::ucscale::{uc_inverse_with, ScaleOptions};

/// Steady-state gain matrix with optional variable metadata.
///
/// Rows are controlled outputs, columns are manipulated inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainMatrix {
    #[serde(flatten)]
    pub matrix: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_units: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_units: Option<Vec<String>>,
}

impl GainMatrix {
    pub fn new(matrix: Matrix) -> Self {
        GainMatrix {
            matrix,
            row_labels: None,
            col_labels: None,
            row_units: None,
            col_units: None,
        }
    }

    /// Checks that every metadata vector matches the matrix shape.
    pub fn validate(&self) -> Result<()> {
        self.matrix.ensure_finite()?;
        let (m, n) = self.matrix.shape();
        let checks = [
            ("row labels", &self.row_labels, m),
            ("column labels", &self.col_labels, n),
            ("row units", &self.row_units, m),
            ("column units", &self.col_units, n),
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

    pub fn with_matrix(&self, matrix: Matrix) -> GainMatrix {
        GainMatrix {
            matrix,
            ..self.clone()
        }
    }
}

impl From<Matrix> for GainMatrix {
    fn from(matrix: Matrix) -> Self {
        GainMatrix::new(matrix)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseMethod {
    /// Moore-Penrose pseudoinverse.
    Mp,
    /// Unit-consistent generalized inverse.
    Uc,
    /// Ordinary inverse; square nonsingular input only.
    Exact,
}

impl InverseMethod {
    pub const ALL: [InverseMethod; 3] = [InverseMethod::Mp, InverseMethod::Uc, InverseMethod::Exact];

    pub fn as_str(self) -> &'static str {
        match self {
            InverseMethod::Mp => "mp",
            InverseMethod::Uc => "uc",
            InverseMethod::Exact => "exact",
        }
    }
}

impl fmt::Display for InverseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseMethod::Mp => "MP",
            InverseMethod::Uc => "UC",
            InverseMethod::Exact => "EXACT",
        })
    }
}

impl std::str::FromStr for InverseMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mp" => Ok(InverseMethod::Mp),
            "uc" => Ok(InverseMethod::Uc),
            "exact" => Ok(InverseMethod::Exact),
            other => Err(Error::InvalidInput(format!("unknown inverse method '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RgaOptions {
    /// Singular-value truncation threshold; `None` uses the default
    /// `eps * max(m, n) * sigma_max`.
    pub rank_tol: Option<f64>,
    pub scaling: ScaleOptions,
}

/// Relative gains with eagerly computed structural diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RgaResult {
    pub lambda: Matrix,
    pub method: InverseMethod,
    pub row_sums: Vec<f64>,
    pub col_sums: Vec<f64>,
    pub total_sum: f64,
    /// Numerical rank of the matrix that was inverted (the canonical core
    /// for UC, which has the same rank as the input).
    pub rank: usize,
}

impl RgaResult {
    fn from_lambda(lambda: Matrix, method: InverseMethod, rank: usize) -> Self {
        RgaResult {
            row_sums: lambda.row_sums(),
            col_sums: lambda.col_sums(),
            total_sum: lambda.sum(),
            lambda,
            method,
            rank,
        }
    }

    /// Describes every structural property that fails at tolerance `tol`:
    /// row and column sums in `[0, 1]` and total sum equal to the rank.
    pub fn property_violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (name, sums) in [("row", &self.row_sums), ("column", &self.col_sums)] {
            for (k, s) in sums.iter().enumerate() {
                if *s > 1.0 + tol || *s < -tol {
                    out.push(format!("{name} {} sums to {s}", k + 1));
                }
            }
        }
        if (self.total_sum - self.rank as f64).abs() > tol {
            out.push(format!(
                "total sum {} differs from rank {}",
                self.total_sum, self.rank
            ));
        }
        out
    }
}

pub fn rga(g: &Matrix, method: InverseMethod) -> Result<RgaResult> {
    rga_with(g, method, &RgaOptions::default())
}

/// `RGA(G) = G ∘ (G⁻)ᵀ` for the selected inverse.
pub fn rga_with(g: &Matrix, method: InverseMethod, opts: &RgaOptions) -> Result<RgaResult> {
    g.ensure_finite()?;
    let (inverse, rank) = match method {
        InverseMethod::Mp => mp_pinv_with_rank(g, opts.rank_tol)?,
        InverseMethod::Uc => uc_inverse_with(g, opts.rank_tol, &opts.scaling)?,
        InverseMethod::Exact => (exact_inverse(g)?, g.rows()),
    };
    let lambda = hadamard(g, &inverse.transpose())?;
    Ok(RgaResult::from_lambda(lambda, method, rank))
}
