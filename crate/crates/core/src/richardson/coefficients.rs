use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scaled Taylor coefficients `c[k−1] = f^{(k)}(t)/k!` for `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TaylorCoefficients {
    c: Vec<f64>,
}

impl TryFrom<Vec<f64>> for TaylorCoefficients {
    type Error = Error;

    fn try_from(c: Vec<f64>) -> Result<Self> {
        Self::new(c)
    }
}

impl From<TaylorCoefficients> for Vec<f64> {
    fn from(c: TaylorCoefficients) -> Self {
        c.c
    }
}

impl TaylorCoefficients {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        if let Some(i) = c.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(Self { c })
    }

    /// From raw derivatives `f^{(1)}(t), …, f^{(n)}(t)`.
    pub fn from_derivatives(derivatives: &[f64]) -> Result<Self> {
        let mut fact = 1.0;
        let c = derivatives
            .iter()
            .enumerate()
            .map(|(i, d)| {
                fact *= (i + 1) as f64;
                d / fact
            })
            .collect();
        Self::new(c)
    }

    /// Number of terms `n`.
    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// Coefficient of `h^k`, `1 ≤ k ≤ n`.
    pub fn get(&self, k: usize) -> f64 {
        self.c[k - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    /// `Σ_{k=1}^{n} c[k] h^k` by Horner's rule.
    pub fn remainder_poly(&self, h: f64) -> Result<f64> {
        if !(h >= 0.0 && h.is_finite()) {
            return Err(Error::InvalidStep(h));
        }
        Ok(self.c.iter().rev().fold(0.0, |acc, &c| (acc + c) * h))
    }

    /// One elimination level: `c′[k] = c[k]·(1 − 2^{j−k})`, so `c′[j] = 0`.
    ///
    /// This is the coefficient map of `P(h) − 2^j P(h/2)`.
    pub fn eliminate_step(&self, j: usize) -> Result<Self> {
        let n = self.order();
        // j = n is allowed: it zeroes the last term, which a single-term
        // input needs.
        if j == 0 || j > n {
            return Err(Error::LevelOutOfRange { level: j, terms: n });
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let k = i + 1;
                if k == j {
                    0.0
                } else {
                    c * (1.0 - pow2(j as i32 - k as i32))
                }
            })
            .collect();
        Ok(Self { c })
    }

    /// Applies levels `j = 1..n−1`; the survivor is `c[n]·κ_n`.
    pub fn eliminate_full(&self) -> (f64, EliminationTable) {
        let n = self.order();
        let mut levels = vec![self.c.clone()];
        let mut cur = self.clone();
        for j in 1..n {
            cur = cur.eliminate_step(j).expect("level within range");
            levels.push(cur.c.clone());
        }
        let table = EliminationTable {
            levels,
            kappa: kappa(n),
        };
        (cur.c[n - 1], table)
    }
}

/// Coefficient arrays of `P_0, …, P_{n−1}` and the closed-form factor `κ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationTable {
    pub levels: Vec<Vec<f64>>,
    pub kappa: f64,
}

/// `κ_n = ∏_{m=1}^{n−1} (1 − 2^{−m})`.
pub fn kappa(n: usize) -> f64 {
    (1..n).map(|m| 1.0 - pow2(-(m as i32))).product()
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}
