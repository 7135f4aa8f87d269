//! Tail modulus of continuity
//! `ω_T(δ) = sup{|f(t) − f(s)| : s, t ∈ [T, T_max], |t − s| ≤ δ}` over grid pairs.
//!
//! The sup is a sliding range query: for every right endpoint `j` the pairs
//! ending there lie in the span `[l_j, j]` of points within `δ`, and the
//! largest gap in that span is `max − min`. Two monotone deques keep the
//! running max and min, so a pass is linear in the number of points. The
//! result is the same IEEE value the quadratic pair scan produces, because
//! `max − min` is one of the pair differences that scan takes the max of.

use std::collections::VecDeque;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{SampledFunction, TailWindow};

/// Running max and min over a window of indices that only moves right.
struct RangeTracker<'a> {
    values: &'a [f64],
    maxq: VecDeque<usize>,
    minq: VecDeque<usize>,
}

impl<'a> RangeTracker<'a> {
    fn new(values: &'a [f64]) -> Self {
        Self {
            values,
            maxq: VecDeque::new(),
            minq: VecDeque::new(),
        }
    }

    fn push(&mut self, j: usize) {
        let v = self.values[j];
        while self.maxq.back().is_some_and(|&b| self.values[b] <= v) {
            self.maxq.pop_back();
        }
        self.maxq.push_back(j);
        while self.minq.back().is_some_and(|&b| self.values[b] >= v) {
            self.minq.pop_back();
        }
        self.minq.push_back(j);
    }

    fn evict_before(&mut self, left: usize) {
        while self.maxq.front().is_some_and(|&f| f < left) {
            self.maxq.pop_front();
        }
        while self.minq.front().is_some_and(|&f| f < left) {
            self.minq.pop_front();
        }
    }

    /// `(argmin, argmax, max − min)` of the current window.
    fn range(&self) -> (usize, usize, f64) {
        let hi = self.maxq[0];
        let lo = self.minq[0];
        (lo, hi, self.values[hi] - self.values[lo])
    }
}

/// Largest pair gap within `delta`, with the pair that attains it.
/// Indices are relative to the slices.
fn sliding_sup(times: &[f64], values: &[f64], delta: f64) -> (f64, usize, usize) {
    let mut tracker = RangeTracker::new(values);
    let mut left = 0;
    let mut best = (0.0, 0, 0);
    for j in 0..times.len() {
        while times[j] - times[left] > delta {
            left += 1;
        }
        tracker.evict_before(left);
        tracker.push(j);
        let (lo, hi, gap) = tracker.range();
        if gap > best.0 {
            best = (gap, lo, hi);
        }
    }
    best
}

fn checked_range(f: &SampledFunction, window: &TailWindow, delta: f64) -> Result<Range<usize>> {
    if !(delta > 0.0) || delta.is_nan() {
        return Err(Error::InvalidDelta(delta));
    }
    f.window_indices(window, 2)
}

/// `ω_T(δ)` over the grid points in `window`.
pub fn tail_modulus(f: &SampledFunction, window: &TailWindow, delta: f64) -> Result<f64> {
    let r = checked_range(f, window, delta)?;
    Ok(sliding_sup(&f.times()[r.clone()], &f.values()[r], delta).0)
}

/// A pair attaining the tail modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPair {
    /// Earlier time of the pair.
    pub s: f64,
    /// Later time of the pair.
    pub t: f64,
    /// `|f(t) − f(s)|`, equal to the modulus.
    pub gap: f64,
}

/// Tail modulus together with a pair attaining it (`None` when the modulus is zero).
pub fn tail_modulus_witness(
    f: &SampledFunction,
    window: &TailWindow,
    delta: f64,
) -> Result<(f64, Option<ExtremalPair>)> {
    let r = checked_range(f, window, delta)?;
    let times = &f.times()[r.clone()];
    let (gap, a, b) = sliding_sup(times, &f.values()[r], delta);
    if gap == 0.0 {
        return Ok((0.0, None));
    }
    let (s, t) = if a < b { (times[a], times[b]) } else { (times[b], times[a]) };
    Ok((gap, Some(ExtremalPair { s, t, gap })))
}

/// `ω` for every start point of `window` at once: entry `k` is the tail
/// modulus over `[times[range.start + k], window.end]`, where `range` is
/// [`SampledFunction::index_range`] of the window.
///
/// Each tail's pairs either fit inside a full span `[l_j, j]` with `l_j` at
/// or after the start (a suffix max over right endpoints) or start before
/// some `l_j`, in which case they sit inside the forward span of the start
/// point. Both families are swept once.
pub fn tail_modulus_profile(f: &SampledFunction, window: &TailWindow, delta: f64) -> Result<Vec<f64>> {
    let r = checked_range(f, window, delta)?;
    let times = &f.times()[r.clone()];
    let values = &f.values()[r];
    let n = times.len();

    let mut span_left = Vec::with_capacity(n);
    let mut span_gap = Vec::with_capacity(n);
    let mut tracker = RangeTracker::new(values);
    let mut left = 0;
    for j in 0..n {
        while times[j] - times[left] > delta {
            left += 1;
        }
        tracker.evict_before(left);
        tracker.push(j);
        span_left.push(left);
        span_gap.push(tracker.range().2);
    }
    let mut suffix = vec![0.0f64; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1].max(span_gap[j]);
    }

    let mut out = Vec::with_capacity(n);
    let mut forward = RangeTracker::new(values);
    let mut right = 0; // one past the last index pushed
    let mut first_full = 0; // first j with span_left[j] >= a
    for a in 0..n {
        while right < n && times[right] - times[a] <= delta {
            forward.push(right);
            right += 1;
        }
        forward.evict_before(a);
        while first_full < n && span_left[first_full] < a {
            first_full += 1;
        }
        out.push(suffix[first_full].max(forward.range().2));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusEntry {
    pub delta: f64,
    pub omega: f64,
    /// `delta` is below the largest grid gap, so some pairs the continuum
    /// sup would see are never compared.
    pub aliased: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusTable {
    pub window: TailWindow,
    /// Largest gap between consecutive grid points in the window.
    pub resolution: f64,
    pub entries: Vec<ModulusEntry>,
}

/// Tail modulus at each of `deltas` (ascending, positive).
pub fn modulus_profile(f: &SampledFunction, window: &TailWindow, deltas: &[f64]) -> Result<ModulusTable> {
    if let Some(bad) = deltas.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::InvalidDelta(*bad));
    }
    if deltas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("deltas must be sorted ascending".into()));
    }
    let range = f.window_indices(window, 2)?;
    let resolution = f.max_step_in(range);
    let entries = deltas
        .iter()
        .map(|&delta| {
            Ok(ModulusEntry {
                delta,
                omega: tail_modulus(f, window, delta)?,
                aliased: delta < resolution,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModulusTable {
        window: *window,
        resolution,
        entries,
    })
}
