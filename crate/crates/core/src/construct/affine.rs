use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Continuous piecewise-affine function on `[domain_start, last node]`,
/// constant at `node_values[0]` before the first node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseAffine {
    nodes: Vec<f64>,
    node_values: Vec<f64>,
    slopes: Vec<f64>,
    domain_start: f64,
}

impl PiecewiseAffine {
    pub fn new(nodes: Vec<f64>, node_values: Vec<f64>, domain_start: f64) -> Result<Self> {
        if nodes.len() != node_values.len() {
            return Err(Error::LengthMismatch {
                times: nodes.len(),
                values: node_values.len(),
            });
        }
        if nodes.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        if let Some(i) = nodes
            .iter()
            .zip(&node_values)
            .position(|(t, v)| !(t.is_finite() && v.is_finite()))
        {
            return Err(Error::NonFinite { index: i });
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NotIncreasing { index: i + 1 });
        }
        if !(domain_start.is_finite() && domain_start <= nodes[0]) {
            return Err(Error::InvalidWindow {
                start: domain_start,
                end: nodes[0],
            });
        }
        let slopes = nodes
            .windows(2)
            .zip(node_values.windows(2))
            .map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect();
        Ok(Self {
            nodes,
            node_values,
            slopes,
            domain_start,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[f64] {
        &self.node_values
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn domain_start(&self) -> f64 {
        self.domain_start
    }

    pub fn domain_end(&self) -> f64 {
        *self.nodes.last().expect("at least one node")
    }

    /// `max |slopes|`, a global Lipschitz constant.
    pub fn lipschitz_constant(&self) -> f64 {
        self.slopes.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Index of the segment containing `t` (`None` before the first node).
    pub fn segment_of(&self, t: f64) -> Option<usize> {
        if t < self.nodes[0] || self.slopes.is_empty() {
            return None;
        }
        let i = self.nodes.partition_point(|&x| x <= t);
        Some((i - 1).min(self.slopes.len() - 1))
    }

    /// `None` outside the domain.
    pub fn eval(&self, t: f64) -> Option<f64> {
        if !(t >= self.domain_start && t <= self.domain_end()) {
            return None;
        }
        Some(match self.segment_of(t) {
            None => self.node_values[0],
            Some(i) => {
                if t == self.nodes[i + 1] {
                    self.node_values[i + 1]
                } else {
                    self.node_values[i] + self.slopes[i] * (t - self.nodes[i])
                }
            }
        })
    }

    /// Number of `times` inside some segment `[t_n, t_{n+1}]` where
    /// `|g(t) − g(t_n)| > |g(t_{n+1}) − g(t_n)|`.
    pub fn drift_violations(&self, times: &[f64]) -> usize {
        let eta = 1e-12 * self.node_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        times
            .iter()
            .filter(|&&t| {
                let Some(i) = self.segment_of(t) else {
                    return false;
                };
                if t > self.domain_end() {
                    return false;
                }
                let moved = (self.eval(t).expect("inside the domain") - self.node_values[i]).abs();
                moved > (self.node_values[i + 1] - self.node_values[i]).abs() + eta
            })
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCheck {
    pub constant: f64,
    pub verified: bool,
    pub trials: usize,
    /// Largest `|g(t) − g(s)| / |t − s|` seen.
    pub worst_ratio: f64,
}

/// Samples `trials` random pairs in the domain and checks
/// `|g(t) − g(s)| ≤ L |t − s| + η` with `L = max |slopes|`.
pub fn piecewise_lipschitz_check(g: &PiecewiseAffine, trials: usize, seed: u64) -> LipschitzCheck {
    let constant = g.lipschitz_constant();
    let eta = 1e-12 * g.node_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (g.domain_start(), g.domain_end());
    let mut verified = true;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..trials {
        let (s, t) = if hi > lo {
            (rng.random_range(lo..=hi), rng.random_range(lo..=hi))
        } else {
            (lo, lo)
        };
        let gap = (g.eval(t).expect("in domain") - g.eval(s).expect("in domain")).abs();
        let dist = (t - s).abs();
        if dist > 0.0 {
            worst_ratio = worst_ratio.max(gap / dist);
        }
        if gap > constant * dist + eta {
            verified = false;
        }
    }
    LipschitzCheck {
        constant,
        verified,
        trials,
        worst_ratio,
    }
}
