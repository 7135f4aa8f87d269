//! Fixtures shared by the benchmarks.

use asymptote_core::{GalleryFunction, GalleryKind, SampledFunction, TailWindow};

/// `kind` sampled on `[0, to]` at `step`.
pub fn fixture(kind: GalleryKind, to: f64, step: f64) -> SampledFunction {
    GalleryFunction::of(kind)
        .sample(&TailWindow::new(0.0, to).expect("valid window"), step)
        .expect("gallery member samples")
}

/// Pair scan for the tail modulus, quadratic in the point count. The
/// baseline the sliding-window version is measured against.
pub fn brute_force_modulus(f: &SampledFunction, delta: f64) -> f64 {
    let (t, v) = (f.times(), f.values());
    let mut best = 0.0f64;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[j] - t[i] > delta {
                break;
            }
            best = best.max((v[j] - v[i]).abs());
        }
    }
    best
}
