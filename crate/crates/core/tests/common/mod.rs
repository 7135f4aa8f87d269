//! Oracles and generators shared by the integration tests.

#![allow(dead_code)]

use asymptote_core::funcspace::{combine, CombineOp};
use asymptote_core::{GalleryFunction, GalleryKind, SampledFunction, TailWindow};
use proptest::prelude::*;

pub fn sample(kind: GalleryKind, to: f64, step: f64) -> SampledFunction {
    GalleryFunction::of(kind)
        .sample(&TailWindow::new(0.0, to).unwrap(), step)
        .unwrap()
}

/// Pair scan over `[t_start, T_max]`, pairs at most `delta` apart.
pub fn brute_modulus(f: &SampledFunction, t_start: f64, delta: f64) -> f64 {
    let (t, v) = (f.times(), f.values());
    let first = t.partition_point(|&x| x < t_start);
    let mut best = 0.0f64;
    for i in first..t.len() {
        for j in i + 1..t.len() {
            if t[j] - t[i] > delta {
                break;
            }
            best = best.max((v[j] - v[i]).abs());
        }
    }
    best
}

/// Largest `|f − g|` over the shared grid.
pub fn sup_distance(f: &SampledFunction, g: &SampledFunction) -> f64 {
    f.values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

pub fn linear(a: f64, f: &SampledFunction, b: f64, g: &SampledFunction) -> SampledFunction {
    let sf = combine(CombineOp::Scale(a), f, None).unwrap();
    let sg = combine(CombineOp::Scale(b), g, None).unwrap();
    combine(CombineOp::Sum, &sf, Some(&sg)).unwrap()
}

pub fn any_kind() -> impl Strategy<Value = GalleryKind> {
    proptest::sample::select(GalleryKind::ALL.to_vec())
}

/// Members whose ground truth says convergent.
pub fn convergent_kind() -> impl Strategy<Value = GalleryKind> {
    let kinds: Vec<GalleryKind> = GalleryKind::ALL
        .into_iter()
        .filter(|k| GalleryFunction::of(*k).labels().converges == Some(true))
        .collect();
    proptest::sample::select(kinds)
}

/// Members whose ground truth says a.u.
pub fn au_kind() -> impl Strategy<Value = GalleryKind> {
    let kinds: Vec<GalleryKind> = GalleryKind::ALL
        .into_iter()
        .filter(|k| GalleryFunction::of(*k).labels().is_au == Some(true))
        .collect();
    proptest::sample::select(kinds)
}

/// Two members and the weights of `a·f + b·g`.
pub fn combination() -> impl Strategy<Value = (GalleryKind, GalleryKind, f64, f64)> {
    (any_kind(), any_kind(), -2.0f64..2.0, -2.0f64..2.0)
}
