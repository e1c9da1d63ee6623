use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Real polynomial in `s`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial(Vec<f64>);

impl Polynomial {
    /// Trailing zero coefficients are dropped; the zero polynomial is `[0]`.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial(coeffs)
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Self {
        Polynomial(vec![1.0])
    }

    /// `c * s^degree`
    pub fn monomial(c: f64, degree: usize) -> Self {
        let mut v = vec![0.0; degree + 1];
        v[degree] = c;
        Polynomial::new(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1.0]
    }

    pub fn constant_term(&self) -> f64 {
        self.0[0]
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.0.len().max(other.0.len());
        let get = |p: &Polynomial, k: usize| p.0.get(k).copied().unwrap_or(0.0);
        Polynomial::new((0..len).map(|k| get(self, k) + get(other, k)).collect())
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        (0..exp).fold(Polynomial::one(), |acc, _| acc.mul(self))
    }

    /// Horner evaluation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }
}

impl fmt::Display for Polynomial {
    /// `(1 - 16s + 140s^2)`; always parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0.0 && !(self.0.len() == 1) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0.0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}s")?,
                _ => write!(f, "{mag}s^{k}")?,
            }
        }
        f.write_str(")")
    }
}
