use serde::{Deserialize, Serialize};

use super::SampledFunction;
use crate::error::{Error, Result};

/// Uniformly continuous scalar maps usable as the outer function of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterMap {
    Identity,
    Sin,
    Clamp { lo: f64, hi: f64 },
}

impl OuterMap {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            OuterMap::Identity => x,
            OuterMap::Sin => x.sin(),
            OuterMap::Clamp { lo, hi } => x.clamp(lo, hi),
        }
    }

    /// Modulus of continuity of the map at scale `e`; all members are 1-Lipschitz.
    pub fn modulus(&self, e: f64) -> f64 {
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineOp {
    Sum,
    Scale(f64),
    ComposeUc(OuterMap),
}

/// Pointwise combination on a shared grid. `Sum` needs `g` on the same grid.
pub fn combine(op: CombineOp, f: &SampledFunction, g: Option<&SampledFunction>) -> Result<SampledFunction> {
    match op {
        CombineOp::Sum => {
            let g = g.ok_or_else(|| Error::InvalidArgument("sum needs two functions".into()))?;
            if !f.same_grid(g) {
                return Err(Error::GridMismatch);
            }
            let values = f.values().iter().zip(g.values()).map(|(a, b)| a + b).collect();
            f.with_values(values)
        }
        CombineOp::Scale(c) => f.map(|v| c * v),
        CombineOp::ComposeUc(outer) => f.map(|v| outer.apply(v)),
    }
}
