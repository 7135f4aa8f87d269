//! Tail profile of `|ḟ| / √(g h)`.

use crate::error::{Error, Result};
use crate::funcspace::SampledFunction;

/// For each `T` in `ladder`, the supremum of `|ḟ| / √(g h)` over grid
/// points in `[T, T_max]`.
///
/// `g` and `h` must be positive and nondecreasing; `f` only fixes the grid.
pub fn hl_ratio_profile(
    f: &SampledFunction,
    df: &SampledFunction,
    g: &SampledFunction,
    h: &SampledFunction,
    ladder: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if !(f.same_grid(df) && f.same_grid(g) && f.same_grid(h)) {
        return Err(Error::GridMismatch);
    }
    let ratio = ratio_values(df, g, h)?;
    // Suffix maxima, so each ladder entry is one lookup.
    let mut suffix = ratio;
    for i in (0..suffix.len() - 1).rev() {
        suffix[i] = suffix[i].max(suffix[i + 1]);
    }
    let times = f.times();
    ladder
        .iter()
        .map(|&t| {
            let i = times.partition_point(|&x| x < t);
            if !t.is_finite() || i == times.len() {
                return Err(Error::InvalidArgument(format!("ladder entry {t} beyond the grid")));
            }
            Ok((t, suffix[i]))
        })
        .collect()
}

pub(crate) fn ratio_values(df: &SampledFunction, g: &SampledFunction, h: &SampledFunction) -> Result<Vec<f64>> {
    for (name, c) in [("g", g), ("h", h)] {
        if let Some(i) = c.values().iter().position(|&v| v <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be positive, got {} at t = {}",
                c.values()[i],
                c.times()[i]
            )));
        }
        if let Some(i) = c.values().windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be nondecreasing, decreases after t = {}",
                c.times()[i]
            )));
        }
    }
    Ok(df
        .values()
        .iter()
        .zip(g.values().iter().zip(h.values()))
        .map(|(d, (a, b))| d.abs() / (a * b).sqrt())
        .collect())
}
