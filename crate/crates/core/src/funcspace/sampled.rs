use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::TailWindow;
use crate::error::{Error, Result};

/// Membership marker attached to a grid point.
///
/// Floating-point grids cannot decide whether a point is an integer or
/// irrational, so membership is declared once when the grid is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointTag {
    Integer,
    Rational,
    Irrational,
}

impl PointTag {
    pub fn is_integer(self) -> bool {
        self == PointTag::Integer
    }

    /// Integers count as rational.
    pub fn is_rational(self) -> bool {
        matches!(self, PointTag::Integer | PointTag::Rational)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PointTag::Integer => "int",
            PointTag::Rational => "rat",
            PointTag::Irrational => "irr",
        }
    }

    pub fn parse(s: &str) -> Option<Option<PointTag>> {
        match s.trim() {
            "" => Some(None),
            "int" => Some(Some(PointTag::Integer)),
            "rat" => Some(Some(PointTag::Rational)),
            "irr" => Some(Some(PointTag::Irrational)),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
struct RawSampled {
    times: Vec<f64>,
    values: Vec<f64>,
    #[serde(default)]
    tags: Vec<Option<PointTag>>,
}

/// A function on a strictly increasing, finite time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampled")]
pub struct SampledFunction {
    times: Vec<f64>,
    values: Vec<f64>,
    tags: Vec<Option<PointTag>>,
}

impl TryFrom<RawSampled> for SampledFunction {
    type Error = Error;

    fn try_from(raw: RawSampled) -> Result<Self> {
        let tags = if raw.tags.is_empty() {
            vec![None; raw.times.len()]
        } else {
            raw.tags
        };
        Self::with_tags(raw.times, raw.values, tags)
    }
}

impl SampledFunction {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let tags = vec![None; times.len()];
        Self::with_tags(times, values, tags)
    }

    pub fn with_tags(
        times: Vec<f64>,
        values: Vec<f64>,
        tags: Vec<Option<PointTag>>,
    ) -> Result<Self> {
        if times.len() != values.len() || tags.len() != times.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        if times.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: times.len(),
            });
        }
        for (i, t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if i > 0 && times[i - 1] >= *t {
                return Err(Error::NotIncreasing { index: i });
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(Self {
            times,
            values,
            tags,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tags(&self) -> &[Option<PointTag>] {
        &self.tags
    }

    pub fn has_tags(&self) -> bool {
        self.tags.iter().any(Option::is_some)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first_time(&self) -> f64 {
        self.times[0]
    }

    pub fn last_time(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// The whole grid as a window.
    pub fn full_window(&self) -> Result<TailWindow> {
        TailWindow::new(self.first_time(), self.last_time())
    }

    /// Index range of the grid points inside `window` (closed on both ends).
    pub fn index_range(&self, window: &TailWindow) -> Range<usize> {
        let lo = self.times.partition_point(|&t| t < window.start);
        let hi = self.times.partition_point(|&t| t <= window.end);
        lo..hi.max(lo)
    }

    /// Index range of `window`, failing when it holds fewer than `needed` points.
    pub fn window_indices(&self, window: &TailWindow, needed: usize) -> Result<Range<usize>> {
        let range = self.index_range(window);
        if range.len() < needed {
            return Err(Error::EmptyWindow {
                start: window.start,
                end: window.end,
                needed,
            });
        }
        Ok(range)
    }

    /// Largest gap between consecutive grid points inside `range`.
    pub fn max_step_in(&self, range: Range<usize>) -> f64 {
        let ts = &self.times[range];
        ts.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    pub fn max_step(&self) -> f64 {
        self.max_step_in(0..self.len())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_in(&self, range: Range<usize>) -> f64 {
        self.values[range].iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn same_grid(&self, other: &SampledFunction) -> bool {
        self.times == other.times
    }

    /// Index of the grid point closest to `t` (ties go right).
    pub fn nearest_index(&self, t: f64) -> usize {
        let i = self.times.partition_point(|&x| x < t);
        if i == 0 {
            return 0;
        }
        if i == self.len() {
            return self.len() - 1;
        }
        if t - self.times[i - 1] < self.times[i] - t {
            i - 1
        } else {
            i
        }
    }

    /// Same grid and tags, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::with_tags(self.times.clone(), values, self.tags.clone())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Central differences in the interior, one-sided at both ends.
    pub fn derivative(&self) -> Result<Self> {
        let (t, v) = (&self.times, &self.values);
        let n = self.len();
        let mut d = Vec::with_capacity(n);
        d.push((v[1] - v[0]) / (t[1] - t[0]));
        for i in 1..n - 1 {
            d.push((v[i + 1] - v[i - 1]) / (t[i + 1] - t[i - 1]));
        }
        d.push((v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]));
        self.with_values(d)
    }

    /// Cumulative trapezoid integral starting at zero on the first grid point.
    pub fn cumulative_integral(&self) -> Result<Self> {
        let (t, v) = (&self.times, &self.values);
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.len());
        out.push(0.0);
        for i in 1..self.len() {
            acc += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
            out.push(acc);
        }
        self.with_values(out)
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        if !(self.first_time() <= t && t <= self.last_time()) {
            return None;
        }
        let i = self.times.partition_point(|&x| x <= t);
        if i == self.len() {
            return Some(self.values[self.len() - 1]);
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        Some(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(matches!(
            SampledFunction::new(vec![0.0], vec![1.0]),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            SampledFunction::new(vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]),
            Err(Error::NotIncreasing { index: 2 })
        ));
        assert!(matches!(
            SampledFunction::new(vec![0.0, 1.0], vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            SampledFunction::new(vec![0.0, 1.0], vec![1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn window_ranges() {
        let f = SampledFunction::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0; 4]).unwrap();
        let w = TailWindow::new(0.5, 2.0).unwrap();
        assert_eq!(f.index_range(&w), 1..3);
        assert!(f.window_indices(&w, 3).is_err());
        assert_eq!(f.nearest_index(1.5), 2);
        assert_eq!(f.nearest_index(1.4), 1);
        assert_eq!(f.nearest_index(-3.0), 0);
        assert_eq!(f.nearest_index(9.0), 3);
    }

    #[test]
    fn derivative_and_integral_of_linear() {
        let times: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let values: Vec<f64> = times.iter().map(|t| 3.0 * t).collect();
        let f = SampledFunction::new(times, values).unwrap();
        for d in f.derivative().unwrap().values() {
            assert!((d - 3.0).abs() < 1e-12);
        }
        let int = f.cumulative_integral().unwrap();
        assert!((int.values()[10] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn interpolation() {
        let f = SampledFunction::new(vec![0.0, 2.0], vec![0.0, 4.0]).unwrap();
        assert_eq!(f.interpolate(0.5), Some(1.0));
        assert_eq!(f.interpolate(2.0), Some(4.0));
        assert_eq!(f.interpolate(2.5), None);
    }

    #[test]
    fn serde_validates() {
        let bad = r#"{"times":[0.0,0.0],"values":[1.0,2.0]}"#;
        assert!(serde_json::from_str::<SampledFunction>(bad).is_err());
        let good = r#"{"times":[0.0,1.0],"values":[1.0,2.0]}"#;
        let f: SampledFunction = serde_json::from_str(good).unwrap();
        assert_eq!(f.len(), 2);
    }
}
