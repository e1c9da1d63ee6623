//! Loop pairing from relative gains.
//!
//! Each relative gain becomes an assignment cost `|λ - 1|`. Nonpositive
//! gains are priced at a large penalty so the matching avoids them whenever
//! it can, and any chosen pair that still carries one is flagged.

mod assignment;

pub use assignment::{
    best_assignment, k_best_assignments, k_best_assignments_constrained, Assignment, Pair,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingRules {
    pub forbid_nonpositive: bool,
    pub large_lambda_warn_threshold: f64,
    pub infeasible_penalty: f64,
    /// Best and runner-up totals closer than this count as a near tie.
    pub tie_epsilon: f64,
    /// Inputs (zero-based) that every pairing must use.
    #[serde(default)]
    pub required_inputs: Vec<usize>,
}

impl Default for PairingRules {
    fn default() -> Self {
        PairingRules {
            forbid_nonpositive: true,
            large_lambda_warn_threshold: 5.0,
            infeasible_penalty: 1e6,
            tie_epsilon: 0.05,
            required_inputs: Vec::new(),
        }
    }
}

impl PairingRules {
    pub fn validate(&self) -> Result<()> {
        let t = self.large_lambda_warn_threshold;
        if !(t.is_finite() && t > 1.0) {
            return Err(Error::InvalidInput(format!(
                "large-lambda threshold must exceed 1, got {t}"
            )));
        }
        let p = self.infeasible_penalty;
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidInput(format!(
                "infeasible penalty must be positive, got {p}"
            )));
        }
        if !(self.tie_epsilon.is_finite() && self.tie_epsilon >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "tie epsilon must be non-negative, got {}",
                self.tie_epsilon
            )));
        }
        Ok(())
    }
}

/// Assignment costs for a relative gain matrix.
pub fn score_matrix(lambda: &Matrix, rules: &PairingRules) -> Result<Matrix> {
    lambda.ensure_finite()?;
    rules.validate()?;
    let (m, n) = lambda.shape();
    Ok(Matrix::from_fn(m, n, |i, j| {
        let l = lambda.get(i, j);
        if rules.forbid_nonpositive && l <= 0.0 {
            rules.infeasible_penalty
        } else {
            (l - 1.0).abs()
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagKind {
    /// Chosen pair has λ <= 0.
    NegativeForced,
    /// Chosen pair has λ above the warning threshold.
    LargeLambda,
    /// Chosen pair is absent from a runner-up whose total is within the
    /// tie epsilon.
    NearTie,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFlag {
    pub output: usize,
    pub input: usize,
    pub kind: FlagKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedLoop {
    pub output: usize,
    pub input: usize,
    pub lambda: f64,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedPairing {
    pub rank: usize,
    pub pairs: Vec<PairedLoop>,
    pub total_cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub assignments: Vec<PairedLoop>,
    pub total_cost: f64,
    pub unmatched_inputs: Vec<usize>,
    pub unmatched_outputs: Vec<usize>,
    /// The k best pairings, rank 1 being `assignments`.
    pub alternatives: Vec<RankedPairing>,
    pub flags: Vec<PairFlag>,
    pub near_tie: bool,
    /// Cost difference between the best and second-best pairing.
    pub runner_up_gap: Option<f64>,
    /// The individually most attractive gain (lowest cost overall) when the
    /// matching constraint keeps it out of the recommended pairing.
    pub most_confident_unchosen: Option<PairedLoop>,
}

impl PairingReport {
    pub fn pair_set(&self) -> Vec<Pair> {
        self.assignments
            .iter()
            .map(|p| Pair::new(p.output, p.input))
            .collect()
    }

    pub fn flags_for(&self, pair: Pair) -> Vec<FlagKind> {
        self.flags
            .iter()
            .filter(|f| f.output == pair.output && f.input == pair.input)
            .map(|f| f.kind)
            .collect()
    }
}

fn annotate(a: &Assignment, lambda: &Matrix, cost: &Matrix) -> Vec<PairedLoop> {
    a.pairs
        .iter()
        .map(|p| PairedLoop {
            output: p.output,
            input: p.input,
            lambda: lambda.get(p.output, p.input),
            cost: cost.get(p.output, p.input),
        })
        .collect()
}

/// Recommended pairing, its k-best alternatives and warnings.
pub fn recommend(lambda: &Matrix, rules: &PairingRules, k: usize) -> Result<PairingReport> {
    let cost = score_matrix(lambda, rules)?;
    let ranked = k_best_assignments_constrained(&cost, k.max(2), &rules.required_inputs)?;
    let best = &ranked[0];
    let assignments = annotate(best, lambda, &cost);

    let (m, n) = lambda.shape();
    let unmatched_inputs = (0..n)
        .filter(|j| !best.pairs.iter().any(|p| p.input == *j))
        .collect();
    let unmatched_outputs = (0..m)
        .filter(|i| !best.pairs.iter().any(|p| p.output == *i))
        .collect();

    let mut flags = Vec::new();
    for p in &assignments {
        if p.lambda <= 0.0 {
            flags.push(PairFlag {
                output: p.output,
                input: p.input,
                kind: FlagKind::NegativeForced,
            });
        }
        if p.lambda > rules.large_lambda_warn_threshold {
            flags.push(PairFlag {
                output: p.output,
                input: p.input,
                kind: FlagKind::LargeLambda,
            });
        }
    }

    let runner_up_gap = ranked.get(1).map(|r| r.total_cost - best.total_cost);
    let near_tie = runner_up_gap.is_some_and(|g| g < rules.tie_epsilon);
    if near_tie {
        for p in &best.pairs {
            if !ranked[1].contains(*p) {
                flags.push(PairFlag {
                    output: p.output,
                    input: p.input,
                    kind: FlagKind::NearTie,
                });
            }
        }
    }
    flags.sort_by_key(|f| (f.output, f.input, f.kind));

    // Lowest-cost entry overall; ties resolved in row-major order.
    let mut most_confident: Option<(usize, usize)> = None;
    for i in 0..m {
        for j in 0..n {
            if most_confident.is_none_or(|(bi, bj)| cost.get(i, j) < cost.get(bi, bj)) {
                most_confident = Some((i, j));
            }
        }
    }
    let most_confident_unchosen = most_confident
        .filter(|&(i, j)| !best.contains(Pair::new(i, j)))
        .map(|(i, j)| PairedLoop {
            output: i,
            input: j,
            lambda: lambda.get(i, j),
            cost: cost.get(i, j),
        });

    let alternatives = ranked
        .iter()
        .take(k.max(1))
        .enumerate()
        .map(|(r, a)| RankedPairing {
            rank: r + 1,
            pairs: annotate(a, lambda, &cost),
            total_cost: a.total_cost,
        })
        .collect();

    Ok(PairingReport {
        assignments,
        total_cost: best.total_cost,
        unmatched_inputs,
        unmatched_outputs,
        alternatives,
        flags,
        near_tie,
        runner_up_gap,
        most_confident_unchosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn score_examples() {
        let rules = PairingRules::default();
        let c = score_matrix(&m(&[&[1.0, -0.5]]), &rules).unwrap();
        assert_eq!(c.row(0), &[0.0, 1e6]);

        let row = m(&[&[1.2586, -0.2889, 0.0, 0.0, 0.0303]]);
        let c = score_matrix(&row, &rules).unwrap();
        let want = [0.2586, 1e6, 1e6, 1e6, 0.9697];
        for (got, want) in c.row(0).iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn nonpositive_allowed_when_not_forbidden() {
        let rules = PairingRules {
            forbid_nonpositive: false,
            ..Default::default()
        };
        let c = score_matrix(&m(&[&[-0.5, 0.0]]), &rules).unwrap();
        assert_eq!(c.row(0), &[1.5, 1.0]);
    }

    #[test]
    fn rules_validation() {
        let bad = PairingRules {
            large_lambda_warn_threshold: 0.5,
            ..Default::default()
        };
        assert!(score_matrix(&Matrix::identity(2), &bad).is_err());
    }

    #[test]
    fn all_negative_forces_flags() {
        let lambda = m(&[&[-1.0, -2.0], &[-3.0, -0.5]]);
        let r = recommend(&lambda, &PairingRules::default(), 3).unwrap();
        assert_eq!(r.assignments.len(), 2);
        let forced = r
            .flags
            .iter()
            .filter(|f| f.kind == FlagKind::NegativeForced)
            .count();
        assert_eq!(forced, 2);
    }

    #[test]
    fn large_lambda_flagged() {
        let lambda = m(&[&[6.0, -5.0], &[-5.0, 6.0]]);
        let r = recommend(&lambda, &PairingRules::default(), 2).unwrap();
        assert_eq!(r.pair_set(), vec![Pair::new(0, 0), Pair::new(1, 1)]);
        assert_eq!(r.flags_for(Pair::new(0, 0)), vec![FlagKind::LargeLambda]);
        assert!(!r.near_tie);
    }

    #[test]
    fn near_tie_detected() {
        let lambda = m(&[&[0.9, 0.88], &[0.88, 0.9]]);
        let r = recommend(&lambda, &PairingRules::default(), 2).unwrap();
        assert!(r.near_tie);
        assert_eq!(r.flags.len(), 2);
        assert!((r.runner_up_gap.unwrap() - 0.04).abs() < 1e-12);
    }

    #[test]
    fn unmatched_and_confident_entries() {
        let lambda = m(&[&[0.5, 0.99, 0.0], &[0.0, 0.98, 0.4]]);
        let r = recommend(&lambda, &PairingRules::default(), 1).unwrap();
        assert_eq!(r.alternatives.len(), 1);
        assert_eq!(r.pair_set(), vec![Pair::new(0, 0), Pair::new(1, 1)]);
        assert_eq!(r.unmatched_inputs, vec![2]);
        assert!(r.unmatched_outputs.is_empty());
        let mc = r.most_confident_unchosen.unwrap();
        assert_eq!((mc.output, mc.input), (0, 1));
    }
}
