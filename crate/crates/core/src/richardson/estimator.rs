use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use super::coefficients::kappa;
use crate::error::{Error, Result};

/// Arithmetic the estimator runs in.
pub trait Scalar:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Relative rounding error of one operation.
    const UNIT_ROUNDOFF: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;

    fn abs(self) -> Self {
        if self < Self::from_f64(0.0) {
            -self
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }
}

/// Double-double.
impl Scalar for TwoFloat {
    const UNIT_ROUNDOFF: f64 = 4.930_380_657_631_324e-32; // 2^-104

    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
}

/// Condition numbers above this, at `f64` precision, are flagged.
pub const CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RichardsonEstimate {
    /// Estimate of `f^{(n)}(t)`.
    pub value: f64,
    /// Largest intermediate magnitude (function values included) over the
    /// magnitude of the final difference.
    pub condition: f64,
    /// `condition` exceeds [`CONDITION_LIMIT`], scaled to the working precision.
    pub flagged: bool,
    pub evaluations: usize,
}

/// `n`-th derivative at `t` from evaluations at `t` and `t + h·2^{−i}`,
/// `i = 0..n−1`.
///
/// `D⁰_h = f(t+h) − f(t)` and `D^j_h = D^{j−1}_h − 2^j D^{j−1}_{h/2}` remove
/// the Taylor terms of order `≤ j`, leaving `κ_n f^{(n)}(t) h^n / n!` plus
/// higher-order terms. Exact for polynomials of degree `≤ n` up to rounding.
pub fn richardson_derivative_in<S: Scalar>(f: impl Fn(S) -> S, t: f64, h: f64, n: usize) -> Result<RichardsonEstimate> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep(h));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::NotRepresentable(t));
    }
    let ts = S::from_f64(t);
    let checked = |x: S| -> Result<S> {
        let v = f(x);
        if v.to_f64().is_finite() {
            Ok(v)
        } else {
            Err(Error::NotRepresentable(x.to_f64()))
        }
    };
    let base = checked(ts)?;
    let mut peak = base.abs();
    // d[i] = D^j at step h·2^{-i}
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let hi = S::from_f64(h * 2f64.powi(-(i as i32)));
        let v = checked(ts + hi)?;
        peak = max(peak, v.abs());
        let diff = v - base;
        peak = max(peak, diff.abs());
        d.push(diff);
    }
    for j in 1..n {
        let w = S::from_f64(2f64.powi(j as i32));
        for i in 0..n - j {
            d[i] = d[i] - w * d[i + 1];
            peak = max(peak, d[i].abs());
        }
    }
    let last = d[0];
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let scale = S::from_f64(fact) / (S::from_f64(kappa(n)) * S::from_f64(h).powi_s(n));
    let value = (last * scale).to_f64();
    let condition = if last.to_f64() == 0.0 {
        if peak.to_f64() == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        peak.to_f64() / last.abs().to_f64()
    };
    let limit = CONDITION_LIMIT * (f64::EPSILON / 2.0) / S::UNIT_ROUNDOFF;
    Ok(RichardsonEstimate {
        value,
        condition,
        flagged: condition > limit,
        evaluations: n + 1,
    })
}

/// [`richardson_derivative_in`] in `f64`.
pub fn richardson_derivative(f: impl Fn(f64) -> f64, t: f64, h: f64, n: usize) -> Result<RichardsonEstimate> {
    richardson_derivative_in::<f64>(f, t, h, n)
}

fn max<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

trait PowI: Scalar {
    fn powi_s(self, n: usize) -> Self {
        (0..n).fold(Self::from_f64(1.0), |acc, _| acc * self)
    }
}

impl<S: Scalar> PowI for S {}
