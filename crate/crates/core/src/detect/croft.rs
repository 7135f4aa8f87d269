//! Sequence tests `f(n t) → 0` for condition (C) and its everywhere form (C*).

use serde::{Deserialize, Serialize};

use super::verdict::Status;
use crate::error::{Error, Result};

/// Default range for generated t-values.
pub const GOLDEN_RANGE: f64 = 10.0;

/// `t_m = m·φ mod range`, `m = 1..=count`.
pub fn golden_t_values(count: usize, range: f64) -> Vec<f64> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    (1..=count).map(|m| (m as f64 * phi) % range).collect()
}

/// Outcome of one sequence `n ↦ f(n t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CroftSequence {
    pub t: f64,
    pub status: Status,
    /// Largest `|f(n t)|` over the tested range of `n`.
    pub max_abs: f64,
    /// The `n` attaining `max_abs`.
    pub argmax_n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CroftReport {
    pub epsilon: f64,
    pub n_start: u64,
    pub n_max: u64,
    pub sequences: Vec<CroftSequence>,
    /// Fraction of t-values whose sequence holds.
    pub c_fraction: f64,
    /// Every sequence holds.
    pub cstar: bool,
}

/// Tests `|f(n t)| < eps` for all `n` in the final quarter `⌈3 n_max/4⌉..=n_max`.
pub fn croft_test(
    eval: impl Fn(f64) -> Result<f64>,
    t_values: &[f64],
    n_max: u64,
    eps: f64,
) -> Result<CroftReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    if n_max < 10 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 10, got {n_max}")));
    }
    if t_values.is_empty() {
        return Err(Error::InvalidArgument("no t-values".into()));
    }
    if let Some(&t) = t_values.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument(format!("t-values must be positive, got {t}")));
    }
    let n_start = (3 * n_max).div_ceil(4);
    let mut sequences = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let mut max_abs = 0.0;
        let mut argmax_n = n_start;
        for n in n_start..=n_max {
            let x = n as f64 * t;
            let v = eval(x)?;
            if !v.is_finite() {
                return Err(Error::NotRepresentable(x));
            }
            if v.abs() > max_abs {
                max_abs = v.abs();
                argmax_n = n;
            }
        }
        let status = if max_abs < eps { Status::Holds } else { Status::Refuted };
        sequences.push(CroftSequence {
            t,
            status,
            max_abs,
            argmax_n,
        });
    }
    let holding = sequences.iter().filter(|s| s.status == Status::Holds).count();
    Ok(CroftReport {
        epsilon: eps,
        n_start,
        n_max,
        c_fraction: holding as f64 / sequences.len() as f64,
        cstar: holding == sequences.len(),
        sequences,
    })
}
