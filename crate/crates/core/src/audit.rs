//! Unit-change audits: does rescaling variables change the RGA or the
//! pairing it implies?

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{diag_scale, Matrix};
use crate::pairing::{recommend, Pair, PairingRules};
use crate::rga::{rga_with, GainMatrix, InverseMethod, RgaOptions};

/// A change of units expressed as positive row and column gain factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitScenario {
    pub name: String,
    pub row_factors: Vec<f64>,
    pub col_factors: Vec<f64>,
    #[serde(default)]
    pub description: String,
}

impl UnitScenario {
    pub fn new(
        name: impl Into<String>,
        row_factors: Vec<f64>,
        col_factors: Vec<f64>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let s = UnitScenario {
            name: name.into(),
            row_factors,
            col_factors,
            description: description.into(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        UnitScenario {
            name: "identity".into(),
            row_factors: vec![1.0; rows],
            col_factors: vec![1.0; cols],
            description: "no unit change".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.row_factors.iter().chain(&self.col_factors);
        for (k, &f) in all.enumerate() {
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::NonPositiveFactor { index: k, value: f });
            }
        }
        Ok(())
    }

    /// The scenario that undoes this one.
    pub fn inverse(&self) -> UnitScenario {
        UnitScenario {
            name: format!("inverse of {}", self.name),
            row_factors: self.row_factors.iter().map(|f| 1.0 / f).collect(),
            col_factors: self.col_factors.iter().map(|f| 1.0 / f).collect(),
            description: format!("undo: {}", self.description),
        }
    }

    pub fn apply(&self, g: &Matrix) -> Result<Matrix> {
        diag_scale(g, &self.row_factors, &self.col_factors)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    /// Absolute entrywise tolerance for `rga_changed`.
    pub rga_tolerance: f64,
    /// Number of ranked baseline pairings kept for comparison.
    pub k: usize,
    pub rga: RgaOptions,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            rga_tolerance: 1e-6,
            k: 3,
            rga: RgaOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditVerdict {
    pub scenario: UnitScenario,
    pub method: InverseMethod,
    pub rga_changed: bool,
    pub pairing_changed: bool,
    pub baseline_pairing: Vec<Pair>,
    pub scenario_pairing: Vec<Pair>,
    pub max_entry_delta: f64,
    pub baseline_near_tie: bool,
    pub scenario_near_tie: bool,
    /// Ranked baseline pairings (rank 1 first).
    pub baseline_alternatives: Vec<Vec<Pair>>,
    /// Zero-based rank of the baseline alternative equal to the scenario
    /// pairing, if any.
    pub scenario_matches_baseline_rank: Option<usize>,
    pub baseline_lambda: Matrix,
    pub scenario_lambda: Matrix,
}

pub fn audit(
    g: &GainMatrix,
    scenario: &UnitScenario,
    method: InverseMethod,
    rules: &PairingRules,
) -> Result<AuditVerdict> {
    audit_with(g, scenario, method, rules, &AuditOptions::default())
}

pub fn audit_with(
    g: &GainMatrix,
    scenario: &UnitScenario,
    method: InverseMethod,
    rules: &PairingRules,
    opts: &AuditOptions,
) -> Result<AuditVerdict> {
    g.validate()?;
    scenario.validate()?;
    let scaled = scenario.apply(&g.matrix)?;

    let base = rga_with(&g.matrix, method, &opts.rga)?;
    let moved = rga_with(&scaled, method, &opts.rga)?;
    let base_pairing = recommend(&base.lambda, rules, opts.k.max(1))?;
    let moved_pairing = recommend(&moved.lambda, rules, opts.k.max(1))?;

    let max_entry_delta = base.lambda.max_abs_diff(&moved.lambda);
    let baseline_pairing = base_pairing.pair_set();
    let scenario_pairing = moved_pairing.pair_set();
    let baseline_alternatives: Vec<Vec<Pair>> = base_pairing
        .alternatives
        .iter()
        .map(|a| a.pairs.iter().map(|p| Pair::new(p.output, p.input)).collect())
        .collect();
    let scenario_matches_baseline_rank = baseline_alternatives
        .iter()
        .position(|alt| *alt == scenario_pairing);

    Ok(AuditVerdict {
        scenario: scenario.clone(),
        method,
        rga_changed: max_entry_delta > opts.rga_tolerance,
        pairing_changed: baseline_pairing != scenario_pairing,
        baseline_pairing,
        scenario_pairing,
        max_entry_delta,
        baseline_near_tie: base_pairing.near_tie,
        scenario_near_tie: moved_pairing.near_tie,
        baseline_alternatives,
        scenario_matches_baseline_rank,
        baseline_lambda: base.lambda,
        scenario_lambda: moved.lambda,
    })
}

const TEMPERATURE_UNITS: &[&str] = &[
    "c", "degc", "°c", "celsius", "f", "degf", "°f", "fahrenheit", "k", "degk", "kelvin",
];

pub fn is_temperature_unit(unit: &str) -> bool {
    let u = unit.trim().to_ascii_lowercase();
    TEMPERATURE_UNITS.contains(&u.as_str())
}

/// Scenario in which the temperature unit shrinks by `factor`, so every
/// temperature reading grows by `factor`.
///
/// A gain is `∂y/∂u`: temperature outputs scale by `factor` and temperature
/// inputs by `1/factor`.
pub fn build_temperature_scenario(
    row_units: &[String],
    col_units: &[String],
    factor: f64,
) -> Result<UnitScenario> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::NonPositiveFactor {
            index: 0,
            value: factor,
        });
    }
    let row_factors: Vec<f64> = row_units
        .iter()
        .map(|u| if is_temperature_unit(u) { factor } else { 1.0 })
        .collect();
    let col_factors: Vec<f64> = col_units
        .iter()
        .map(|u| if is_temperature_unit(u) { 1.0 / factor } else { 1.0 })
        .collect();
    let temps = row_units
        .iter()
        .chain(col_units)
        .filter(|u| is_temperature_unit(u))
        .count();
    UnitScenario::new(
        format!("temperature/{factor}"),
        row_factors,
        col_factors,
        format!("temperature unit divided by {factor} on {temps} variables"),
    )
}

/// [`build_temperature_scenario`] from the unit tags carried by `g`.
pub fn temperature_scenario_for(g: &GainMatrix, factor: f64) -> Result<UnitScenario> {
    let rows = g
        .row_units
        .as_ref()
        .ok_or_else(|| Error::MissingUnits("output (row) units are not tagged".into()))?;
    let cols = g
        .col_units
        .as_ref()
        .ok_or_else(|| Error::MissingUnits("input (column) units are not tagged".into()))?;
    g.validate()?;
    build_temperature_scenario(rows, cols, factor)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzMethodSummary {
    pub method: InverseMethod,
    pub pairing_changed_trials: usize,
    pub pairing_changed_fraction: f64,
    pub max_entry_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub seed: u64,
    pub factor_range: (f64, f64),
    pub methods: Vec<FuzzMethodSummary>,
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        // keep the stream position independent of the range
        let _: f64 = rng.gen();
        lo
    } else {
        let t: f64 = rng.gen();
        (lo.ln() + t * (hi.ln() - lo.ln())).exp()
    }
}

/// Random diagonal rescalings drawn log-uniformly from `factor_range`,
/// summarized per method (MP and UC). Deterministic for a fixed seed.
pub fn fuzz(
    g: &GainMatrix,
    trials: usize,
    seed: u64,
    factor_range: (f64, f64),
    rules: &PairingRules,
) -> Result<FuzzReport> {
    let (lo, hi) = factor_range;
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
        return Err(Error::InvalidInput(format!(
            "factor range must satisfy 0 < lo <= hi, got ({lo}, {hi})"
        )));
    }
    g.validate()?;
    let (m, n) = g.matrix.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let methods = [InverseMethod::Mp, InverseMethod::Uc];
    let opts = AuditOptions {
        k: 1,
        ..Default::default()
    };
    let mut changed = [0usize; 2];
    let mut max_delta = [0.0f64; 2];
    for t in 0..trials {
        let row_factors = (0..m).map(|_| log_uniform(&mut rng, lo, hi)).collect();
        let col_factors = (0..n).map(|_| log_uniform(&mut rng, lo, hi)).collect();
        let scenario = UnitScenario::new(format!("trial {t}"), row_factors, col_factors, "")?;
        for (k, method) in methods.iter().enumerate() {
            let v = audit_with(g, &scenario, *method, rules, &opts)?;
            changed[k] += usize::from(v.pairing_changed);
            max_delta[k] = max_delta[k].max(v.max_entry_delta);
        }
    }
    Ok(FuzzReport {
        trials,
        seed,
        factor_range,
        methods: methods
            .iter()
            .enumerate()
            .map(|(k, &method)| FuzzMethodSummary {
                method,
                pairing_changed_trials: changed[k],
                pairing_changed_fraction: changed[k] as f64 / trials as f64,
                max_entry_delta: max_delta[k],
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn temperature_scenario_from_tags() {
        let s = build_temperature_scenario(
            &units(&["degC", "degC", "degC", "%"]),
            &units(&["degC", "%", "%", "%", "degC"]),
            10.0,
        )
        .unwrap();
        assert_eq!(s.row_factors, vec![10.0, 10.0, 10.0, 1.0]);
        assert_eq!(s.col_factors, vec![0.1, 1.0, 1.0, 1.0, 0.1]);
    }

    #[test]
    fn unit_factor_and_untagged_give_identity() {
        let s = build_temperature_scenario(&units(&["degC"]), &units(&["degC", "%"]), 1.0).unwrap();
        assert_eq!(s.row_factors, vec![1.0]);
        assert_eq!(s.col_factors, vec![1.0, 1.0]);
        let s = build_temperature_scenario(&units(&["kg/h"]), &units(&["%", "m"]), 10.0).unwrap();
        assert_eq!(s.row_factors, vec![1.0]);
        assert_eq!(s.col_factors, vec![1.0, 1.0]);
    }

    #[test]
    fn missing_units_rejected() {
        let g = GainMatrix::new(Matrix::identity(2));
        assert!(matches!(
            temperature_scenario_for(&g, 10.0),
            Err(Error::MissingUnits(_))
        ));
    }

    #[test]
    fn identity_scenario_changes_nothing() {
        let g = GainMatrix::new(
            Matrix::from_rows(&[[16.8, 3.2, 10.5, 0.6], [7.1, 4.2, 1.9, 6.3], [2.5, 20.0, 9.4, 3.4]])
                .unwrap(),
        );
        for method in [InverseMethod::Mp, InverseMethod::Uc] {
            let v = audit(&g, &UnitScenario::identity(3, 4), method, &PairingRules::default())
                .unwrap();
            assert!(!v.rga_changed);
            assert!(!v.pairing_changed);
            assert_eq!(v.max_entry_delta, 0.0);
            assert_eq!(v.scenario_matches_baseline_rank, Some(0));
        }
    }

    #[test]
    fn scenario_shape_checked() {
        let g = GainMatrix::new(Matrix::identity(2));
        let s = UnitScenario::identity(3, 2);
        assert!(matches!(
            audit(&g, &s, InverseMethod::Mp, &PairingRules::default()),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(UnitScenario::new("bad", vec![0.0], vec![1.0], "").is_err());
    }

    #[test]
    fn fuzz_rejects_bad_ranges() {
        let g = GainMatrix::new(Matrix::identity(2));
        let rules = PairingRules::default();
        assert!(fuzz(&g, 0, 0, (1.0, 1.0), &rules).is_err());
        assert!(fuzz(&g, 1, 0, (2.0, 1.0), &rules).is_err());
        assert!(fuzz(&g, 1, 0, (0.0, 1.0), &rules).is_err());
    }

    #[test]
    fn fuzz_unit_range_never_flips() {
        let g = GainMatrix::new(Matrix::from_rows(&[[1.0, 2.0, 0.5], [3.0, -1.0, 2.0]]).unwrap());
        let r = fuzz(&g, 1, 0, (1.0, 1.0), &PairingRules::default()).unwrap();
        for s in &r.methods {
            assert_eq!(s.pairing_changed_trials, 0);
            assert_eq!(s.max_entry_delta, 0.0);
        }
    }
}
