//! Asymptotic-uniformity and uniform-continuity verdicts.
//!
//! The search is bounded: tail starts at fixed quantiles of the window and
//! δ on the geometric ladder `span/10 · 2^{-k}` down to a multiple of the
//! grid resolution. Tails are scanned earliest first and, within a tail,
//! δ largest first; the first cell whose modulus clears `eps − η` wins.

use super::verdict::{slack, Certificate, Property, Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::funcspace::{SampledFunction, TailWindow};
use crate::modulus::{tail_modulus_profile, tail_modulus_witness};

/// Quantiles of the window used as tail starts.
pub const TAIL_QUANTILES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.9];

/// Fewest ladder rungs for a verdict other than `Inconclusive`.
const MIN_RUNGS: usize = 3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct AuSearch {
    /// Only the window start is tried as tail start.
    pub uniform: bool,
    /// Smallest δ as a multiple of the grid resolution.
    pub min_delta_steps: f64,
}

impl Default for AuSearch {
    fn default() -> Self {
        Self {
            uniform: false,
            min_delta_steps: 2.0,
        }
    }
}

/// `δ_k = span/10 · 2^{-k}` while `δ_k ≥ min_delta`.
pub fn delta_ladder(span: f64, min_delta: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut d = span / 10.0;
    while d >= min_delta && out.len() < 64 {
        out.push(d);
        d *= 0.5;
    }
    out
}

pub(crate) fn au_search(f: &SampledFunction, eps: f64, window: &TailWindow, opts: AuSearch) -> Result<Verdict> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let property = if opts.uniform { Property::IsUc } else { Property::IsAu };
    let range = f.window_indices(window, 2)?;
    let resolution = f.max_step_in(range.clone());
    let eta = slack(f, range.clone());
    let ladder = delta_ladder(window.span(), opts.min_delta_steps * resolution);
    if ladder.len() < MIN_RUNGS {
        return Ok(Verdict::inconclusive(
            property,
            eps,
            *window,
            resolution,
            format!(
                "window too short: {} delta rung(s) above {} x grid step",
                ladder.len(),
                opts.min_delta_steps
            ),
        ));
    }

    let times = f.times();
    let quantiles: &[f64] = if opts.uniform { &[0.0] } else { &TAIL_QUANTILES };
    let mut starts: Vec<usize> = quantiles
        .iter()
        .map(|&q| times.partition_point(|&t| t < window.at_fraction(q)))
        .filter(|&i| i + 1 < range.end)
        .collect();
    starts.dedup();

    let profiles = ladder
        .iter()
        .map(|&d| tail_modulus_profile(f, window, d))
        .collect::<Result<Vec<_>>>()?;

    for &start in &starts {
        for (k, &delta) in ladder.iter().enumerate() {
            let omega = profiles[k][start - range.start];
            if omega < eps - eta {
                return Ok(Verdict {
                    property,
                    status: Status::Holds,
                    epsilon: eps,
                    certificate: Some(Certificate {
                        epsilon: eps,
                        t_start: times[start],
                        t_end: window.end,
                        delta: Some(delta),
                        limit_estimate: None,
                    }),
                    witness: None,
                    window: *window,
                    resolution,
                    notes: format!("omega = {omega:e} at T = {}, delta = {delta}", times[start]),
                });
            }
        }
    }

    let last = *starts.last().expect("window holds at least two points");
    let smallest = *ladder.last().expect("ladder has rungs");
    let tail = window.with_start(times[last])?;
    let (omega, pair) = tail_modulus_witness(f, &tail, smallest)?;
    if let Some(p) = pair.filter(|_| omega >= eps) {
        return Ok(Verdict {
            property,
            status: Status::Refuted,
            epsilon: eps,
            certificate: None,
            witness: Some(Witness {
                s: p.s,
                t: p.t,
                gap: p.gap,
                delta: Some(smallest),
            }),
            window: *window,
            resolution,
            notes: format!("omega = {omega:e} at T = {}, delta = {smallest}", times[last]),
        });
    }
    Ok(Verdict::inconclusive(
        property,
        eps,
        *window,
        resolution,
        format!("omega = {omega:e} within rounding slack of eps"),
    ))
}

/// Finite-window verdict on asymptotic uniformity at tolerance `eps`.
pub fn detect_au(f: &SampledFunction, eps: f64, window: &TailWindow) -> Result<Verdict> {
    au_search(f, eps, window, AuSearch::default())
}

/// [`detect_au`] with the tail pinned to the window start.
pub fn detect_uc(f: &SampledFunction, eps: f64, window: &TailWindow) -> Result<Verdict> {
    au_search(
        f,
        eps,
        window,
        AuSearch {
            uniform: true,
            ..AuSearch::default()
        },
    )
}
