use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::funcspace::{SampledFunction, TailWindow};
use crate::modulus::tail_modulus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    LimitExists,
    Vanishes,
    IsAu,
    IsUc,
    Bounded,
    ConditionC,
    ConditionCstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Refuted,
    Inconclusive,
}

/// The `(ε, T, δ)` data behind a `Holds` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub epsilon: f64,
    /// Start of the tail the certificate covers.
    pub t_start: f64,
    /// End of that tail.
    pub t_end: f64,
    pub delta: Option<f64>,
    pub limit_estimate: Option<f64>,
}

/// A concrete pair violating the property. For `vanishes` and `bounded`
/// the pair collapses to one point (`s == t`) and `gap` is `|f(t)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub s: f64,
    pub t: f64,
    pub gap: f64,
    /// Largest `|t − s|` the refuted statement allowed, when one applies.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub status: Status,
    pub epsilon: f64,
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
    pub window: TailWindow,
    /// Largest grid gap inside the window.
    pub resolution: f64,
    pub notes: String,
}

impl Verdict {
    pub(crate) fn inconclusive(
        property: Property,
        epsilon: f64,
        window: TailWindow,
        resolution: f64,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            property,
            status: Status::Inconclusive,
            epsilon,
            certificate: None,
            witness: None,
            window,
            resolution,
            notes: notes.into(),
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    /// Re-derives the verdict's claim from `f` alone.
    ///
    /// `Holds` re-checks the certificate, `Refuted` re-checks the witness;
    /// `Inconclusive` claims nothing and always passes.
    pub fn recheck(&self, f: &SampledFunction) -> Result<bool> {
        match self.status {
            Status::Inconclusive => Ok(true),
            Status::Holds => {
                let Some(c) = self.certificate else {
                    return Ok(false);
                };
                let tail = TailWindow::new(c.t_start, c.t_end)?;
                let range = f.window_indices(&tail, 1)?;
                let values = &f.values()[range];
                Ok(match self.property {
                    Property::IsAu | Property::IsUc => match c.delta {
                        Some(d) => tail_modulus(f, &tail, d)? < c.epsilon,
                        None => false,
                    },
                    Property::LimitExists => {
                        let (lo, hi) = min_max(values);
                        hi - lo < c.epsilon
                    }
                    Property::Vanishes => values.iter().all(|v| v.abs() < c.epsilon),
                    Property::Bounded => values.iter().all(|v| v.abs() <= c.epsilon),
                    Property::ConditionC | Property::ConditionCstar => false,
                })
            }
            Status::Refuted => {
                let Some(w) = self.witness else {
                    return Ok(false);
                };
                let (Some(fs), Some(ft)) = (value_at(f, w.s), value_at(f, w.t)) else {
                    return Ok(false);
                };
                let inside = self.window.contains(w.s) && self.window.contains(w.t);
                let close = w.delta.is_none_or(|d| (w.t - w.s).abs() <= d);
                let gap = match self.property {
                    Property::Vanishes | Property::Bounded => ft.abs(),
                    _ => (ft - fs).abs(),
                };
                let violated = match self.property {
                    Property::Bounded => gap > self.epsilon,
                    _ => gap >= self.epsilon,
                };
                Ok(inside && close && violated && gap == w.gap)
            }
        }
    }
}

/// Value at an exact grid time.
pub(crate) fn value_at(f: &SampledFunction, t: f64) -> Option<f64> {
    let i = f.times().partition_point(|&x| x < t);
    (i < f.len() && f.times()[i] == t).then(|| f.values()[i])
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Rounding slack for strict inequalities: `1e-12 · max|f|`.
pub(crate) fn slack(f: &SampledFunction, range: std::ops::Range<usize>) -> f64 {
    1e-12 * f.max_abs_in(range)
}
