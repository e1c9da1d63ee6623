//! Bundled example matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{diag_scale, Matrix};
use crate::rga::GainMatrix;
use crate::tf::{self, TransferMatrix};

/// Crude distillation unit, 4 outputs by 5 inputs.
///
/// The heater-outlet column (u5) carries static gains 16 and 22 for the
/// kero/LGO and LGO/HGO cutpoints. Writing those numerators as `16s` and
/// `22s` instead would make the steady-state gains zero.
pub const SAKAI_DSL: &str = r"# Crude distillation unit: 4 outputs x 5 inputs, time in minutes
# u1 top temperature, u2 kero yield, u3 LGO yield, u4 HGO yield, u5 heater outlet temperature
# y1 naphtha/kero cutpoint, y2 kero/LGO cutpoint, y3 LGO/HGO cutpoint, y4 overflash
inputs:  u1[degC], u2[%], u3[%], u4[%], u5[degC]
outputs: y1[degC], y2[degC], y3[degC], y4[%]
3.8(16s+1)/(140s^2+14s+1) & 2.9e^{-6s}/(10s+1) & 0 & 0 & -0.73(-16s+1)e^{-4s}/(150s^2+20s+1) \\
3.9(4.5s+1)/(96s^2+17s+1) & 6.3/(20s+1) & 0 & 0 & 16e^{-2s}/((5s+1)(14s+1)) \\
3.8(0.8s+1)/(23s^2+13s+1) & 6.1(12s+1)e^{-s}/(337s^2+34s+1) & 3.4e^{-2s}/(6.9s+1) & 0 & 22e^{-2s}/((5s+1)(10s+1)) \\
-1.62(5.3s+1)e^{-s}/(13s^2+13s+1) & -1.53(3.1s+1)/(5.1s^2+7.1s+1) & -1.3(7.6s+1)/(4.7s^2+7.1s+1) & -0.6e^{-s}/(2s+1) & 0.32(-9.1s+1)e^{-s}/(12s^2+15s+1)
";

pub const NAMES: [&str; 9] = [
    "ones3",
    "scaled-ones3",
    "A",
    "B",
    "AB",
    "tfg-seconds",
    "tfg-minutes",
    "sakai",
    "rank1-2x2",
];

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FixtureData {
    Matrix { gain: GainMatrix },
    TransferFunction { text: &'static str },
}

#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub data: FixtureData,
}

impl Fixture {
    /// Steady-state gain matrix (evaluating transfer functions at s = 0).
    pub fn gain(&self) -> Result<GainMatrix> {
        match &self.data {
            FixtureData::Matrix { gain } => Ok(gain.clone()),
            FixtureData::TransferFunction { text } => tf::steady_state(&tf::parse(text)?),
        }
    }

    pub fn transfer_matrix(&self) -> Option<Result<TransferMatrix>> {
        match &self.data {
            FixtureData::TransferFunction { text } => Some(tf::parse(text)),
            FixtureData::Matrix { .. } => None,
        }
    }
}

fn mat<const N: usize>(rows: &[[f64; N]]) -> Matrix {
    Matrix::from_rows(rows).expect("fixture matrix is valid")
}

pub fn ones3() -> Matrix {
    mat(&[[1.0; 3]; 3])
}

pub fn scaled_ones3() -> Matrix {
    mat(&[[4.0, 2.0, 2.0], [2.0, 1.0, 1.0], [2.0, 1.0, 1.0]])
}

pub fn a() -> Matrix {
    mat(&[[7.0, 4.0, 8.0], [7.0, 2.0, 5.0], [3.0, 8.0, 8.0]])
}

/// `a()` with its columns scaled by (3, 4, 2).
pub fn b() -> Matrix {
    mat(&[[21.0, 16.0, 16.0], [21.0, 8.0, 10.0], [9.0, 32.0, 16.0]])
}

pub fn ab() -> Matrix {
    a().hcat(&b()).expect("same row count")
}

pub fn tfg_seconds() -> Matrix {
    mat(&[
        [16.8, 3.2, 10.5, 0.6],
        [7.1, 4.2, 1.9, 6.3],
        [2.5, 20.0, 9.4, 3.4],
    ])
}

/// Column factors converting the first input of `tfg_seconds` from a
/// per-second to a per-minute basis.
pub const SECONDS_TO_MINUTES: [f64; 4] = [1.0 / 60.0, 1.0, 1.0, 1.0];

pub fn tfg_minutes() -> Matrix {
    diag_scale(&tfg_seconds(), &[1.0; 3], &SECONDS_TO_MINUTES).expect("valid factors")
}

pub fn rank1_2x2() -> Matrix {
    mat(&[[1.0, 2.0], [3.0, 6.0]])
}

pub fn all() -> Vec<Fixture> {
    NAMES.iter().map(|n| get(n).expect("listed fixture exists")).collect()
}

pub fn get(name: &str) -> Result<Fixture> {
    let plain = |name, description, m: Matrix| Fixture {
        name,
        description,
        data: FixtureData::Matrix {
            gain: GainMatrix::new(m),
        },
    };
    Ok(match name {
        "ones3" => plain("ones3", "3x3 all-ones: every interaction identical", ones3()),
        "scaled-ones3" => plain(
            "scaled-ones3",
            "all-ones 3x3 with first row and column scaled by 2",
            scaled_ones3(),
        ),
        "A" => plain("A", "nonsingular 3x3 test matrix", a()),
        "B" => plain("B", "A with columns scaled by (3, 4, 2)", b()),
        "AB" => plain("AB", "3x6 block matrix [A B]", ab()),
        "tfg-seconds" => plain(
            "tfg-seconds",
            "3x4 process gains with time measured in seconds",
            tfg_seconds(),
        ),
        "tfg-minutes" => plain(
            "tfg-minutes",
            "tfg-seconds with the first column scaled by 1/60 (minutes)",
            tfg_minutes(),
        ),
        "sakai" => Fixture {
            name: "sakai",
            description: "crude distillation unit transfer matrix (4x5) with temperature unit tags",
            data: FixtureData::TransferFunction { text: SAKAI_DSL },
        },
        "rank1-2x2" => plain("rank1-2x2", "2x2 rank-1 positive matrix", rank1_2x2()),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown fixture '{other}'; available: {}",
                NAMES.join(", ")
            )))
        }
    })
}
