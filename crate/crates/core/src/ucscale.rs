//! Canonical diagonal scaling and the unit-consistent generalized inverse.
//!
//! A real matrix `G` is factored as `G = D * S * E` with positive diagonals
//! `D`, `E` such that every row and column of `|S|` with at least one
//! nonzero has unit geometric mean over its nonzero entries. `S` is unique
//! for a given zero pattern, which is what makes
//! `uc_inverse(G) = E^-1 * pinv(S) * D^-1` consistent with respect to
//! positive diagonal scalings of `G`.
//!
//! The scaling is the least-squares fit of `log|g_ij| ~ r_i + c_j` over the
//! support, computed by alternating row and column mean removal in the log
//! domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{mp_pinv_with_rank, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledDecomposition {
    /// Left diagonal, one factor per row.
    pub d: Vec<f64>,
    /// Right diagonal, one factor per column.
    pub e: Vec<f64>,
    /// Canonical core.
    pub s: Matrix,
    /// Alternating sweeps performed.
    pub iterations: usize,
    /// Largest absolute mean log-magnitude over supported rows and columns.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for ScaleOptions {
    fn default() -> Self {
        ScaleOptions {
            tol: 1e-12,
            max_iters: 10_000,
        }
    }
}

struct Support {
    rows: usize,
    cols: usize,
    // (i, j, log|g_ij|) for every nonzero entry
    cells: Vec<(usize, usize, f64)>,
    row_counts: Vec<usize>,
    col_counts: Vec<usize>,
}

impl Support {
    fn new(g: &Matrix) -> Self {
        let (rows, cols) = g.shape();
        let mut cells = Vec::new();
        let mut row_counts = vec![0; rows];
        let mut col_counts = vec![0; cols];
        for i in 0..rows {
            for j in 0..cols {
                let v = g.get(i, j);
                if v != 0.0 {
                    cells.push((i, j, v.abs().ln()));
                    row_counts[i] += 1;
                    col_counts[j] += 1;
                }
            }
        }
        Support {
            rows,
            cols,
            cells,
            row_counts,
            col_counts,
        }
    }

    fn row_means(&self, r: &[f64], c: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; self.rows];
        for &(i, j, l) in &self.cells {
            acc[i] += l - r[i] - c[j];
        }
        for (a, &n) in acc.iter_mut().zip(&self.row_counts) {
            if n > 0 {
                *a /= n as f64;
            }
        }
        acc
    }

    fn col_means(&self, r: &[f64], c: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; self.cols];
        for &(i, j, l) in &self.cells {
            acc[j] += l - r[i] - c[j];
        }
        for (a, &n) in acc.iter_mut().zip(&self.col_counts) {
            if n > 0 {
                *a /= n as f64;
            }
        }
        acc
    }

    /// Connected components of the bipartite support graph. Rows are nodes
    /// `0..rows`, columns `rows..rows+cols`.
    fn components(&self) -> Vec<usize> {
        let n = self.rows + self.cols;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j, _) in &self.cells {
            let a = find(&mut parent, i);
            let b = find(&mut parent, self.rows + j);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Canonical scaling `G = D * S * E`.
///
/// Within each connected block of the support the offsets are only defined
/// up to `r + a`, `c - a`; the returned factors fix `a` so that the mean log
/// of the row factors equals the mean log of the column factors in every
/// block. Entirely-zero rows and columns get factor 1.
pub fn canonical_scale(g: &Matrix, opts: &ScaleOptions) -> Result<ScaledDecomposition> {
    g.ensure_finite()?;
    if !(opts.tol.is_finite() && opts.tol > 0.0) || opts.max_iters == 0 {
        return Err(Error::InvalidInput(format!(
            "invalid scaling options: tol {}, max_iters {}",
            opts.tol, opts.max_iters
        )));
    }
    let support = Support::new(g);
    let (m, n) = g.shape();
    let mut r = vec![0.0; m];
    let mut c = vec![0.0; n];

    let residual_of = |r: &[f64], c: &[f64]| {
        max_abs(&support.row_means(r, c)).max(max_abs(&support.col_means(r, c)))
    };

    let mut residual = residual_of(&r, &c);
    let mut iterations = 0;
    while residual >= opts.tol {
        if iterations == opts.max_iters {
            return Err(Error::Convergence {
                iterations,
                residual,
            });
        }
        let dr = support.row_means(&r, &c);
        r.iter_mut().zip(&dr).for_each(|(ri, d)| *ri += d);
        let dc = support.col_means(&r, &c);
        c.iter_mut().zip(&dc).for_each(|(cj, d)| *cj += d);
        iterations += 1;
        residual = residual_of(&r, &c);
    }

    balance_gauge(&support, &mut r, &mut c);

    let d: Vec<f64> = r.iter().map(|x| x.exp()).collect();
    let e: Vec<f64> = c.iter().map(|x| x.exp()).collect();
    let s = Matrix::from_fn(m, n, |i, j| g.get(i, j) / d[i] / e[j]);
    Ok(ScaledDecomposition {
        d,
        e,
        s,
        iterations,
        residual,
    })
}

fn balance_gauge(support: &Support, r: &mut [f64], c: &mut [f64]) {
    let m = support.rows;
    let comp = support.components();
    let mut sums: std::collections::BTreeMap<usize, (f64, usize, f64, usize)> =
        Default::default();
    for i in 0..m {
        if support.row_counts[i] > 0 {
            let e = sums.entry(comp[i]).or_default();
            e.0 += r[i];
            e.1 += 1;
        }
    }
    for j in 0..support.cols {
        if support.col_counts[j] > 0 {
            let e = sums.entry(comp[m + j]).or_default();
            e.2 += c[j];
            e.3 += 1;
        }
    }
    for i in 0..m {
        if support.row_counts[i] == 0 {
            r[i] = 0.0;
        } else {
            let (rs, rn, cs, cn) = sums[&comp[i]];
            r[i] -= (rs / rn as f64 - cs / cn as f64) / 2.0;
        }
    }
    for j in 0..support.cols {
        if support.col_counts[j] == 0 {
            c[j] = 0.0;
        } else {
            let (rs, rn, cs, cn) = sums[&comp[m + j]];
            c[j] += (rs / rn as f64 - cs / cn as f64) / 2.0;
        }
    }
}

/// Unit-consistent generalized inverse with default scaling options.
pub fn uc_inverse(g: &Matrix, rank_tol: Option<f64>) -> Result<Matrix> {
    Ok(uc_inverse_with(g, rank_tol, &ScaleOptions::default())?.0)
}

/// Unit-consistent inverse and the numerical rank of the canonical core.
pub fn uc_inverse_with(
    g: &Matrix,
    rank_tol: Option<f64>,
    opts: &ScaleOptions,
) -> Result<(Matrix, usize)> {
    let dec = canonical_scale(g, opts)?;
    let (core_pinv, rank) = mp_pinv_with_rank(&dec.s, rank_tol)?;
    let (m, n) = g.shape();
    let inv = Matrix::from_fn(n, m, |j, i| core_pinv.get(j, i) / dec.e[j] / dec.d[i]);
    Ok((inv, rank))
}
