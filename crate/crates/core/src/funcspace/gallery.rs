//! Closed-form example functions with known asymptotic behaviour.
//!
//! Each member carries ground-truth labels. Detectors never look at them;
//! they exist so test suites can compare verdicts against the known answer.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{PointTag, SampledFunction, TailWindow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalleryKind {
    /// `0` at integer nodes, `e^{-t}` elsewhere.
    PuncturedExp,
    Identity,
    Sine,
    /// `sin(t²)`.
    SineSquare,
    /// `e^{-t}` on rational-tagged points, `0` on irrational-tagged ones.
    ExpRationalIndicator,
    /// Primitive of `e^{-t}` times the period-2 square wave.
    DampedSquareWavePrimitive,
    /// `e^{-t} + 1` at integer nodes, `e^{-t}` elsewhere.
    ExpPlusNatIndicator,
    /// `sin(t²)/(1+t)`.
    SlowChirpDecay,
    /// Triangular spikes of height 1 and half-width `w/n²` at each integer `n ≥ 1`.
    SpikeTrain,
    ExpDecay,
    Constant,
    /// `sin(t)/(1+t)`.
    DampedSine,
    /// `sin(πt)`.
    SinPi,
    /// `|sin(πt)|`.
    AbsSinPi,
}

impl GalleryKind {
    pub const ALL: [GalleryKind; 14] = [
        GalleryKind::PuncturedExp,
        GalleryKind::Identity,
        GalleryKind::Sine,
        GalleryKind::SineSquare,
        GalleryKind::ExpRationalIndicator,
        GalleryKind::DampedSquareWavePrimitive,
        GalleryKind::ExpPlusNatIndicator,
        GalleryKind::SlowChirpDecay,
        GalleryKind::SpikeTrain,
        GalleryKind::ExpDecay,
        GalleryKind::Constant,
        GalleryKind::DampedSine,
        GalleryKind::SinPi,
        GalleryKind::AbsSinPi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GalleryKind::PuncturedExp => "punctured_exp",
            GalleryKind::Identity => "identity",
            GalleryKind::Sine => "sine",
            GalleryKind::SineSquare => "sine_square",
            GalleryKind::ExpRationalIndicator => "exp_rational_indicator",
            GalleryKind::DampedSquareWavePrimitive => "damped_square_wave_primitive",
            GalleryKind::ExpPlusNatIndicator => "exp_plus_nat_indicator",
            GalleryKind::SlowChirpDecay => "slow_chirp_decay",
            GalleryKind::SpikeTrain => "spike_train",
            GalleryKind::ExpDecay => "exp_decay",
            GalleryKind::Constant => "constant",
            GalleryKind::DampedSine => "damped_sine",
            GalleryKind::SinPi => "sin_pi",
            GalleryKind::AbsSinPi => "abs_sin_pi",
        }
    }

    fn default_params(self) -> Vec<f64> {
        match self {
            GalleryKind::SpikeTrain => vec![1.0],
            GalleryKind::Constant => vec![0.0],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for GalleryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GalleryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GalleryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Ground truth for a gallery member on the whole half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GalleryLabels {
    pub converges: Option<bool>,
    pub is_au: Option<bool>,
    pub is_uc: Option<bool>,
    pub limit: Option<f64>,
    pub continuous: bool,
}

/// A gallery member with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryFunction {
    pub kind: GalleryKind,
    pub params: Vec<f64>,
}

impl GalleryFunction {
    /// Missing parameters fall back to the member's defaults.
    pub fn new(kind: GalleryKind, params: Vec<f64>) -> Result<Self> {
        let expected = kind.default_params().len();
        let params = if params.is_empty() {
            kind.default_params()
        } else {
            params
        };
        if params.len() != expected {
            return Err(Error::InvalidParams(format!(
                "{kind} takes {expected} parameter(s), got {}",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParams(format!("{kind}: non-finite parameter")));
        }
        if kind == GalleryKind::SpikeTrain && params[0] <= 0.0 {
            return Err(Error::InvalidParams("spike_train width must be positive".into()));
        }
        Ok(Self { kind, params })
    }

    pub fn of(kind: GalleryKind) -> Self {
        Self {
            kind,
            params: kind.default_params(),
        }
    }

    pub fn labels(&self) -> GalleryLabels {
        use GalleryKind::*;
        let (converges, is_au, is_uc, limit, continuous) = match self.kind {
            PuncturedExp => (true, true, false, Some(0.0), false),
            Identity => (false, true, true, None, true),
            Sine => (false, true, true, None, true),
            SineSquare => (false, false, false, None, true),
            ExpRationalIndicator => (true, true, false, Some(0.0), false),
            DampedSquareWavePrimitive => (true, true, true, Some(1.0 / (1.0 + 1.0 / E)), true),
            ExpPlusNatIndicator => (false, false, false, None, false),
            SlowChirpDecay => (true, true, true, Some(0.0), true),
            SpikeTrain => (false, false, false, None, true),
            ExpDecay => (true, true, true, Some(0.0), true),
            Constant => (true, true, true, Some(self.params[0]), true),
            DampedSine => (true, true, true, Some(0.0), true),
            SinPi => (false, true, true, None, true),
            AbsSinPi => (false, true, true, None, true),
        };
        GalleryLabels {
            converges: Some(converges),
            is_au: Some(is_au),
            is_uc: Some(is_uc),
            limit,
            continuous,
        }
    }

    pub fn eval(&self, t: f64, tag: Option<PointTag>) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::NotRepresentable(t));
        }
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let is_int = tag.is_some_and(PointTag::is_integer);
        let v = match self.kind {
            GalleryKind::PuncturedExp => {
                if is_int {
                    0.0
                } else {
                    (-t).exp()
                }
            }
            GalleryKind::Identity => t,
            GalleryKind::Sine => t.sin(),
            GalleryKind::SineSquare => (t * t).sin(),
            GalleryKind::ExpRationalIndicator => match tag {
                Some(PointTag::Irrational) => 0.0,
                _ => (-t).exp(),
            },
            GalleryKind::DampedSquareWavePrimitive => damped_square_wave_primitive(t),
            GalleryKind::ExpPlusNatIndicator => (-t).exp() + if is_int { 1.0 } else { 0.0 },
            GalleryKind::SlowChirpDecay => (t * t).sin() / (1.0 + t),
            GalleryKind::SpikeTrain => spike_train(t, self.params[0]),
            GalleryKind::ExpDecay => (-t).exp(),
            GalleryKind::Constant => self.params[0],
            GalleryKind::DampedSine => t.sin() / (1.0 + t),
            GalleryKind::SinPi => sin_pi(t),
            GalleryKind::AbsSinPi => sin_pi(t).abs(),
        };
        Ok(v)
    }

    /// Evaluation off any grid: exact integers are tagged [`PointTag::Integer`].
    pub fn eval_auto_tag(&self, t: f64) -> Result<f64> {
        let tag = (t.fract() == 0.0).then_some(PointTag::Integer);
        self.eval(t, tag)
    }

    /// Exact `order`-th derivative where the member is smooth enough and a
    /// closed form is available.
    pub fn derivative(&self, t: f64, order: usize) -> Option<f64> {
        if order == 0 {
            return self.eval(t, None).ok();
        }
        if !(t.is_finite() && t >= 0.0) {
            return None;
        }
        let v = match self.kind {
            GalleryKind::Identity => {
                if order == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            GalleryKind::Constant => 0.0,
            GalleryKind::Sine => sin_shift(t, order),
            GalleryKind::SinPi => PI.powi(order as i32) * sin_pi_shift(t, order),
            GalleryKind::ExpDecay => {
                let e = (-t).exp();
                if order.is_multiple_of(2) {
                    e
                } else {
                    -e
                }
            }
            GalleryKind::SineSquare => chirp_derivative(t, order)?,
            GalleryKind::DampedSine => leibniz_over_one_plus_t(t, order, |j| Some(sin_shift(t, j)))?,
            GalleryKind::SlowChirpDecay => leibniz_over_one_plus_t(t, order, |j| chirp_derivative(t, j))?,
            GalleryKind::DampedSquareWavePrimitive if order == 1 => {
                if square_wave(t) {
                    (-t).exp()
                } else {
                    0.0
                }
            }
            _ => return None,
        };
        Some(v)
    }

    /// Highest derivative order `derivative` supports (0 when none).
    pub fn max_derivative_order(&self) -> usize {
        match self.kind {
            GalleryKind::Identity
            | GalleryKind::Constant
            | GalleryKind::Sine
            | GalleryKind::SinPi
            | GalleryKind::ExpDecay
            | GalleryKind::DampedSine => 8,
            GalleryKind::SineSquare | GalleryKind::SlowChirpDecay => 3,
            GalleryKind::DampedSquareWavePrimitive => 1,
            _ => 0,
        }
    }

    /// Samples on a uniform grid covering `window`.
    ///
    /// Grid points within `1e-12` (relative) of an integer are snapped onto it
    /// and tagged [`PointTag::Integer`]. For `exp_rational_indicator` the
    /// remaining points alternate between rational and irrational tags.
    pub fn sample(&self, window: &TailWindow, step: f64) -> Result<SampledFunction> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidStep(step));
        }
        let count = (window.span() / step + 1e-9).floor() as usize + 1;
        if count < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: count,
            });
        }
        let mut times = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        let mut tags = Vec::with_capacity(count);
        for i in 0..count {
            let mut t = window.start + i as f64 * step;
            let r = t.round();
            let tag = if (t - r).abs() <= 1e-12 * r.abs().max(1.0) {
                t = r;
                Some(PointTag::Integer)
            } else if self.kind == GalleryKind::ExpRationalIndicator {
                Some(if i % 2 == 0 {
                    PointTag::Rational
                } else {
                    PointTag::Irrational
                })
            } else {
                None
            };
            values.push(self.eval(t, tag)?);
            times.push(t);
            tags.push(tag);
        }
        SampledFunction::with_tags(times, values, tags)
    }

    /// Exact-derivative channel on the grid of `f`, if available.
    pub fn derivative_samples(&self, f: &SampledFunction, order: usize) -> Option<SampledFunction> {
        if order > self.max_derivative_order() {
            return None;
        }
        let values = f
            .times()
            .iter()
            .map(|&t| self.derivative(t, order))
            .collect::<Option<Vec<_>>>()?;
        f.with_values(values).ok()
    }
}

/// Convenience wrapper matching the free-function form of evaluation.
pub fn gallery_eval(kind: &str, params: &[f64], t: f64, tag: Option<PointTag>) -> Result<f64> {
    GalleryFunction::new(kind.parse()?, params.to_vec())?.eval(t, tag)
}

fn square_wave(t: f64) -> bool {
    t % 2.0 < 1.0
}

/// `sin(πt)` with exact zeros at the integers.
fn sin_pi(t: f64) -> f64 {
    let r = t % 2.0;
    if r < 1.0 {
        (PI * r).sin()
    } else {
        -(PI * (r - 1.0)).sin()
    }
}

fn sin_pi_shift(t: f64, order: usize) -> f64 {
    match order % 4 {
        0 => sin_pi(t),
        1 => sin_pi(t + 0.5),
        2 => -sin_pi(t),
        _ => -sin_pi(t + 0.5),
    }
}

/// `order`-th derivative of `sin`.
fn sin_shift(t: f64, order: usize) -> f64 {
    match order % 4 {
        0 => t.sin(),
        1 => t.cos(),
        2 => -t.sin(),
        _ => -t.cos(),
    }
}

/// Derivatives of `sin(t²)` up to third order.
fn chirp_derivative(t: f64, order: usize) -> Option<f64> {
    let (s, c) = (t * t).sin_cos();
    match order {
        0 => Some(s),
        1 => Some(2.0 * t * c),
        2 => Some(2.0 * c - 4.0 * t * t * s),
        3 => Some(-12.0 * t * s - 8.0 * t * t * t * c),
        _ => None,
    }
}

/// `(u / (1+t))^{(order)}` by the Leibniz rule, given `u^{(j)}(t)`.
fn leibniz_over_one_plus_t(t: f64, order: usize, u: impl Fn(usize) -> Option<f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=order {
        let m = order - j;
        let fact: f64 = (1..=m).map(|x| x as f64).product();
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let v = sign * fact / (1.0 + t).powi(m as i32 + 1);
        sum += binom * u(j)? * v;
        binom = binom * (order - j) as f64 / (j + 1) as f64;
    }
    Some(sum)
}

fn spike_train(t: f64, width: f64) -> f64 {
    let lo = ((t - width).floor().max(1.0)) as u64;
    let hi = (t + width).ceil().max(0.0) as u64;
    let mut best: f64 = 0.0;
    for n in lo..=hi {
        let nf = n as f64;
        let half = width / (nf * nf);
        let d = (t - nf).abs();
        if d < half {
            best = best.max(1.0 - d / half);
        }
    }
    best
}

/// `e^{-t} g(t) + ∫₀ᵗ e^{-s} g(s) ds`, `g` the primitive of the square wave.
///
/// `g(s) = s - m` on `[2m, 2m+1]` and `m + 1` on `[2m+1, 2m+2]`, so every
/// piece integrates in closed form via `∫ e^{-s}(a + b s) ds = -e^{-s}(a + b s + b)`.
fn damped_square_wave_primitive(t: f64) -> f64 {
    let antideriv = |s: f64, a: f64, b: f64| -(-s).exp() * (a + b * s + b);
    let piece = |lo: f64, hi: f64, k: u64| -> f64 {
        let m = (k / 2) as f64;
        let (a, b) = if k.is_multiple_of(2) { (-m, 1.0) } else { (m + 1.0, 0.0) };
        antideriv(hi, a, b) - antideriv(lo, a, b)
    };
    let g = |s: f64| -> f64 {
        let m = (s / 2.0).floor();
        let r = s - 2.0 * m;
        if r < 1.0 {
            m + r
        } else {
            m + 1.0
        }
    };
    // Beyond s ≈ 745 every term underflows to zero.
    let last = t.min(800.0);
    let full = last.floor() as u64;
    let mut integral = 0.0;
    for k in 0..full {
        integral += piece(k as f64, k as f64 + 1.0, k);
    }
    if last > full as f64 {
        integral += piece(full as f64, last, full);
    }
    (-t).exp() * g(t) + integral
}
