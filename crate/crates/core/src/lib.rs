//! Relative gain arrays for square, singular and rectangular plants.
//!
//! The crate computes RGAs with the Moore-Penrose pseudoinverse, the
//! unit-consistent generalized inverse or the ordinary inverse, turns them
//! into loop pairings by constrained assignment, and audits whether those
//! pairings survive changes of units.
//!
//! ```
//! use rga_core::{fixtures, rga, InverseMethod};
//!
//! let g = fixtures::scaled_ones3();
//! let uc = rga(&g, InverseMethod::Uc).unwrap();
//! assert!(uc.lambda.entries().iter().all(|v| (v - 1.0 / 9.0).abs() < 1e-10));
//! ```

pub mod audit;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod pairing;
pub mod rga;
pub mod tf;
pub mod ucscale;

pub use audit::{
    audit, audit_with, build_temperature_scenario, fuzz, temperature_scenario_for, AuditOptions,
    AuditVerdict, FuzzReport, UnitScenario,
};
pub use error::{Error, Result};
pub use linalg::{diag_scale, hadamard, mp_pinv, numerical_rank, Matrix, RankInfo};
pub use pairing::{
    best_assignment, k_best_assignments, recommend, score_matrix, Assignment, Pair,
    PairingReport, PairingRules,
};
pub use rga::{rga, rga_with, GainMatrix, InverseMethod, RgaOptions, RgaResult};
pub use ucscale::{canonical_scale, uc_inverse, ScaleOptions, ScaledDecomposition};
