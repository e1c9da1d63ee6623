//! Dense real-matrix primitives.
//!
//! Everything here works on small, dense, double-precision matrices. The
//! pseudoinverse always goes through the SVD; there is no normal-equations
//! shortcut.

use std::fmt;
use std::ops::Index;

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense real matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        Matrix::new(raw.rows, raw.cols, raw.entries)
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                actual: format!("{} entries", entries.len()),
            });
        }
        let m = Matrix {
            rows,
            cols,
            entries,
        };
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::ShapeMismatch {
                    expected: format!("{n_cols} columns"),
                    actual: format!("{} columns in row {}", r.len(), i + 1),
                });
            }
            entries.extend_from_slice(r);
        }
        Matrix::new(n_rows, n_cols, entries)
    }

    /// Internal constructor for results of arithmetic on valid matrices.
    pub(crate) fn from_parts(rows: usize, cols: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_parts(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::from_parts(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn ensure_finite(&self) -> Result<()> {
        match self.entries.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(k) => Err(Error::InvalidInput(format!(
                "entry ({}, {}) is not finite: {}",
                k / self.cols + 1,
                k % self.cols + 1,
                self.entries[k]
            ))),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows on the right operand", self.cols),
                actual: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Matrix::from_parts(
            self.rows,
            self.cols,
            self.entries.iter().map(|v| v * factor).collect(),
        )
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                actual: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(Matrix::from_parts(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Largest entrywise absolute difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.rows),
                actual: format!("{} rows", other.rows),
            });
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// Sub-block of `rows x cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    fn to_faer(&self) -> Mat<f64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    fn from_faer(m: &Mat<f64>) -> Matrix {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{v:>12.6} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Singular-value summary of a matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankInfo {
    pub numerical_rank: usize,
    /// Sorted in non-increasing order.
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
}

struct Svd {
    u: Mat<f64>,
    v: Mat<f64>,
    singular_values: Vec<f64>,
}

fn svd(g: &Matrix) -> Result<Svd> {
    let d = g.to_faer().thin_svd().map_err(|_| Error::SvdFailed)?;
    Ok(Svd {
        u: d.U().to_owned(),
        v: d.V().to_owned(),
        singular_values: (0..g.rows.min(g.cols)).map(|k| d.S()[k]).collect(),
    })
}

/// Default truncation threshold: `eps * max(m, n) * sigma_max`.
pub fn default_rank_tol(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    f64::EPSILON * rows.max(cols) as f64 * sigma_max
}

fn resolve_tol(rank_tol: Option<f64>, g: &Matrix, sigma_max: f64) -> Result<f64> {
    match rank_tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(Error::InvalidInput(format!(
            "rank tolerance must be positive and finite, got {t}"
        ))),
        Some(t) => Ok(t),
        None => Ok(default_rank_tol(g.rows, g.cols, sigma_max)),
    }
}

pub fn numerical_rank(g: &Matrix, rank_tol: Option<f64>) -> Result<RankInfo> {
    g.ensure_finite()?;
    let mut singular_values = svd(g)?.singular_values;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let tolerance_used = resolve_tol(rank_tol, g, sigma_max)?;
    let numerical_rank = singular_values
        .iter()
        .filter(|&&s| s > tolerance_used)
        .count();
    Ok(RankInfo {
        numerical_rank,
        singular_values,
        tolerance_used,
    })
}

/// Moore-Penrose pseudoinverse via the SVD, truncating singular values at
/// or below `rank_tol`.
pub fn mp_pinv(g: &Matrix, rank_tol: Option<f64>) -> Result<Matrix> {
    Ok(mp_pinv_with_rank(g, rank_tol)?.0)
}

/// Pseudoinverse together with the number of singular values kept.
pub fn mp_pinv_with_rank(g: &Matrix, rank_tol: Option<f64>) -> Result<(Matrix, usize)> {
    g.ensure_finite()?;
    let Svd {
        u,
        v,
        singular_values,
    } = svd(g)?;
    let sigma_max = singular_values.iter().copied().fold(0.0, f64::max);
    let tol = resolve_tol(rank_tol, g, sigma_max)?;

    let (m, n) = g.shape();
    let mut pinv = Mat::<f64>::zeros(n, m);
    let mut rank = 0;
    for (k, &sigma) in singular_values.iter().enumerate() {
        if sigma <= tol {
            continue;
        }
        rank += 1;
        // pinv += v_k * u_k^T / sigma_k
        let inv = 1.0 / sigma;
        for i in 0..n {
            let vik = v[(i, k)] * inv;
            for j in 0..m {
                pinv[(i, j)] += vik * u[(j, k)];
            }
        }
    }
    Ok((Matrix::from_faer(&pinv), rank))
}

/// Ordinary inverse of a square nonsingular matrix (LU with partial pivoting).
pub fn exact_inverse(g: &Matrix) -> Result<Matrix> {
    g.ensure_finite()?;
    if !g.is_square() {
        return Err(Error::MethodMismatch(format!(
            "ordinary inverse requires a square matrix, got {}x{}",
            g.rows, g.cols
        )));
    }
    let info = numerical_rank(g, None)?;
    if info.numerical_rank < g.rows {
        return Err(Error::MethodMismatch(format!(
            "ordinary inverse requires full rank, numerical rank is {} of {}",
            info.numerical_rank, g.rows
        )));
    }
    let inv = Matrix::from_faer(&g.to_faer().partial_piv_lu().inverse());
    inv.ensure_finite()
        .map_err(|_| Error::MethodMismatch("matrix is singular to working precision".into()))?;
    Ok(inv)
}

/// Entrywise product.
pub fn hadamard(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.zip_with(b, |x, y| x * y)
}

/// `diag(row_factors) * g * diag(col_factors)`.
pub fn diag_scale(g: &Matrix, row_factors: &[f64], col_factors: &[f64]) -> Result<Matrix> {
    if row_factors.len() != g.rows || col_factors.len() != g.cols {
        return Err(Error::ShapeMismatch {
            expected: format!("{} row and {} column factors", g.rows, g.cols),
            actual: format!(
                "{} row and {} column factors",
                row_factors.len(),
                col_factors.len()
            ),
        });
    }
    check_factors(row_factors, 0)?;
    check_factors(col_factors, row_factors.len())?;
    Ok(Matrix::from_fn(g.rows, g.cols, |i, j| {
        row_factors[i] * g.get(i, j) * col_factors[j]
    }))
}

fn check_factors(factors: &[f64], offset: usize) -> Result<()> {
    match factors.iter().position(|f| !(f.is_finite() && *f > 0.0)) {
        None => Ok(()),
        Some(k) => Err(Error::NonPositiveFactor {
            index: offset + k,
            value: factors[k],
        }),
    }
}
