//! Minimum-cost rectangular assignment and k-best ranking.
//!
//! Single solutions come from a shortest-augmenting-path Hungarian solver
//! on a square padding of the cost matrix. Ranking uses Murty's partition
//! scheme over the real rows only, so padded rows never produce duplicate
//! solutions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One output/input pairing, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    pub output: usize,
    pub input: usize,
}

impl Pair {
    pub fn new(output: usize, input: usize) -> Self {
        Pair { output, input }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    /// Sorted by output index.
    pub pairs: Vec<Pair>,
    pub total_cost: f64,
}

impl Assignment {
    pub fn contains(&self, pair: Pair) -> bool {
        self.pairs.contains(&pair)
    }
}

/// Hungarian algorithm (potentials + Dijkstra-like augmentation) on an
/// `n x n` cost matrix where `f64::INFINITY` marks a forbidden cell.
/// Returns the column assigned to each row, or `None` if no perfect
/// matching avoids forbidden cells.
fn hungarian_square(cost: &[Vec<f64>]) -> Option<Vec<usize>> {
    let n = cost.len();
    // 1-based arrays; index 0 is the virtual root
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let c = cost[i0 - 1][j - 1];
                if c.is_finite() {
                    let cur = c - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                return None;
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    Some(col_of_row)
}

/// A rows <= cols problem with forced and forbidden cells.
#[derive(Clone, Debug)]
struct Problem<'a> {
    cost: &'a [Vec<f64>],
    cols: usize,
    required_cols: &'a [bool],
}

#[derive(Clone, Debug, Default)]
struct Constraints {
    forced: Vec<(usize, usize)>,
    forbidden: Vec<(usize, usize)>,
}

impl Problem<'_> {
    fn rows(&self) -> usize {
        self.cost.len()
    }

    fn solution_cost(&self, cols: &[usize]) -> f64 {
        cols.iter().enumerate().map(|(i, &j)| self.cost[i][j]).sum()
    }

    /// Square padded matrix honoring the constraints. Dummy rows may take
    /// any optional column at zero cost but never a required one.
    fn padded(&self, cons: &Constraints) -> Vec<Vec<f64>> {
        let m = self.rows();
        let n = self.cols;
        let mut out = vec![vec![0.0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = if i < m {
                    self.cost[i][j]
                } else if self.required_cols[j] {
                    f64::INFINITY
                } else {
                    0.0
                };
            }
        }
        for &(r, c) in &cons.forced {
            for j in 0..n {
                if j != c {
                    out[r][j] = f64::INFINITY;
                }
            }
            for (i, row) in out.iter_mut().enumerate() {
                if i != r {
                    row[c] = f64::INFINITY;
                }
            }
        }
        for &(r, c) in &cons.forbidden {
            out[r][c] = f64::INFINITY;
        }
        out
    }

    fn solve_raw(&self, cons: &Constraints) -> Option<Vec<usize>> {
        let mut sol = hungarian_square(&self.padded(cons))?;
        sol.truncate(self.rows());
        Some(sol)
    }

    /// Optimal solution, made canonical by preferring the lexicographically
    /// smallest column sequence among solutions tied with the optimum.
    fn solve(&self, cons: &Constraints) -> Option<(Vec<usize>, f64)> {
        let first = self.solve_raw(cons)?;
        let best = self.solution_cost(&first);
        let eps = tie_tolerance(best);
        let mut fixed = cons.clone();
        let mut chosen = Vec::with_capacity(self.rows());
        for r in 0..self.rows() {
            if let Some(&(_, c)) = cons.forced.iter().find(|(fr, _)| *fr == r) {
                chosen.push(c);
                continue;
            }
            let mut picked = None;
            for c in 0..self.cols {
                if chosen.contains(&c)
                    || cons.forbidden.contains(&(r, c))
                    || cons.forced.iter().any(|&(_, fc)| fc == c)
                    || !self.cost[r][c].is_finite()
                {
                    continue;
                }
                let mut trial = fixed.clone();
                trial.forced.push((r, c));
                if let Some(sol) = self.solve_raw(&trial) {
                    if self.solution_cost(&sol) <= best + eps {
                        picked = Some(c);
                        break;
                    }
                }
            }
            // an unconstrained re-solve always qualifies; fall back to it if
            // rounding rejected every candidate
            let c = picked.unwrap_or_else(|| {
                self.solve_raw(&fixed).map_or(first[r], |sol| sol[r])
            });
            fixed.forced.push((r, c));
            chosen.push(c);
        }
        let cost = self.solution_cost(&chosen);
        Some((chosen, cost))
    }
}

fn tie_tolerance(cost: f64) -> f64 {
    1e-12 * cost.abs().max(1.0)
}

#[derive(Debug)]
struct Node {
    cost: f64,
    solution: Vec<usize>,
    cons: Constraints,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.solution.cmp(&self.solution))
    }
}

fn validate_cost(cost: &Matrix) -> Result<()> {
    cost.ensure_finite()
}

/// Orientation-normalized view: the solver wants rows <= cols.
struct Oriented {
    rows: Vec<Vec<f64>>,
    transposed: bool,
    required: Vec<bool>,
}

fn orient(cost: &Matrix, required_inputs: &[usize]) -> Result<Oriented> {
    let (m, n) = cost.shape();
    for &j in required_inputs {
        if j >= n {
            return Err(Error::InvalidInput(format!(
                "required input {} out of range for {n} inputs",
                j + 1
            )));
        }
    }
    if m <= n {
        let mut required = vec![false; n];
        for &j in required_inputs {
            required[j] = true;
        }
        if required.iter().filter(|r| **r).count() > m {
            return Err(Error::Infeasible(format!(
                "{} required inputs but only {m} outputs",
                required_inputs.len()
            )));
        }
        Ok(Oriented {
            rows: cost.to_rows(),
            transposed: false,
            required,
        })
    } else {
        // every input is matched when inputs are the scarce side
        Ok(Oriented {
            rows: cost.transpose().to_rows(),
            transposed: true,
            required: vec![false; m],
        })
    }
}

fn to_assignment(o: &Oriented, solution: &[usize], cost: f64) -> Assignment {
    let mut pairs: Vec<Pair> = solution
        .iter()
        .enumerate()
        .map(|(i, &j)| if o.transposed { Pair::new(j, i) } else { Pair::new(i, j) })
        .collect();
    pairs.sort();
    Assignment {
        pairs,
        total_cost: cost,
    }
}

/// Minimum-cost matching of size `min(m, n)`.
pub fn best_assignment(cost: &Matrix) -> Result<Assignment> {
    let mut ranked = k_best_assignments_constrained(cost, 1, &[])?;
    Ok(ranked.remove(0))
}

/// The `k` cheapest distinct matchings in non-decreasing cost order.
pub fn k_best_assignments(cost: &Matrix, k: usize) -> Result<Vec<Assignment>> {
    k_best_assignments_constrained(cost, k, &[])
}

/// As [`k_best_assignments`], restricted to matchings that pair every input
/// listed in `required_inputs`.
pub fn k_best_assignments_constrained(
    cost: &Matrix,
    k: usize,
    required_inputs: &[usize],
) -> Result<Vec<Assignment>> {
    validate_cost(cost)?;
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let o = orient(cost, required_inputs)?;
    let problem = Problem {
        cost: &o.rows,
        cols: o.rows[0].len(),
        required_cols: &o.required,
    };

    let root = Constraints::default();
    let (solution, c) = problem
        .solve(&root)
        .ok_or_else(|| Error::Infeasible("no matching satisfies the required inputs".into()))?;
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        cost: c,
        solution,
        cons: root,
    });

    let mut out = Vec::with_capacity(k);
    while let Some(node) = heap.pop() {
        out.push(to_assignment(&o, &node.solution, node.cost));
        if out.len() == k {
            break;
        }
        // Partition the remaining solution space of this node.
        let mut inherited = node.cons.forced.clone();
        for (r, &c) in node.solution.iter().enumerate() {
            if node.cons.forced.contains(&(r, c)) {
                continue;
            }
            let mut cons = Constraints {
                forced: inherited.clone(),
                forbidden: node.cons.forbidden.clone(),
            };
            cons.forbidden.push((r, c));
            if let Some((solution, cost)) = problem.solve(&cons) {
                heap.push(Node {
                    cost,
                    solution,
                    cons,
                });
            }
            inherited.push((r, c));
        }
    }
    Ok(out)
}
