use serde::{Deserialize, Serialize};

use super::affine::PiecewiseAffine;
use crate::detect::{au_search, AuSearch, Verdict};
use crate::error::{Error, Result};
use crate::funcspace::{SampledFunction, TailWindow};
use crate::modulus::tail_modulus_witness;

/// The `(T, δ)` part of an a.u. certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailCertificate {
    pub t_start: f64,
    pub delta: f64,
}

impl TailCertificate {
    pub fn new(t_start: f64, delta: f64) -> Self {
        Self { t_start, delta }
    }
}

/// Piecewise-affine `g` with nodes `T + n δ/2` and `g(t_n) = f(t_n)`.
///
/// The certificate must hold at `eps/2` on the tail. Node values come from
/// the nearest grid point, so the grid step may be at most `δ/4`. On return
/// `|f − g| < eps` at every grid point of `[T, last node]` and every slope
/// is below `eps/δ` in absolute value.
pub fn build_lipschitz_approximant(f: &SampledFunction, eps: f64, cert: TailCertificate) -> Result<PiecewiseAffine> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let TailCertificate { t_start, delta } = cert;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidDelta(delta));
    }
    let last = f.last_time();
    if !(t_start.is_finite() && t_start >= f.first_time() && t_start + delta / 2.0 <= last) {
        return Err(Error::InvalidWindow {
            start: t_start,
            end: last,
        });
    }
    validate_tail(f, t_start, delta, eps / 2.0)?;
    let g = interpolant(f, t_start, delta, last, t_start)?;

    // Both bounds follow from the certificate; a failure here is a defect.
    let tube = verify_tube(f, &g, eps, &TailWindow::new(t_start, g.domain_end())?)?;
    if !tube.inside {
        return Err(Error::InvalidArgument(format!(
            "tube check failed: deviation {} at t = {}",
            tube.max_deviation, tube.argmax
        )));
    }
    if g.lipschitz_constant() >= eps / delta {
        return Err(Error::InvalidArgument(format!(
            "slope bound failed: {} >= {}",
            g.lipschitz_constant(),
            eps / delta
        )));
    }
    Ok(g)
}

/// Searches an a.u. certificate at `eps/2` whose `δ` is at least four grid
/// steps, as [`build_lipschitz_approximant`] needs.
pub fn tube_certificate(f: &SampledFunction, eps: f64) -> Result<Verdict> {
    let search = AuSearch {
        min_delta_steps: 4.0,
        ..AuSearch::default()
    };
    au_search(f, eps / 2.0, &f.full_window()?, search)
}

/// Checks `ω(δ) < bound` on the tail from `T` (widened to the grid point
/// nearest `T`) and that the grid there is at most `δ/4` coarse.
pub(crate) fn validate_tail(f: &SampledFunction, t_start: f64, delta: f64, bound: f64) -> Result<()> {
    let start = tail_start_index(f, t_start);
    let tail = TailWindow::new(f.times()[start], f.last_time())?;
    let step = f.max_step_in(f.index_range(&tail));
    if step > delta / 4.0 {
        return Err(Error::GridTooCoarse { step, delta });
    }
    let (omega, pair) = tail_modulus_witness(f, &tail, delta)?;
    if omega >= bound {
        let p = pair.expect("positive modulus has a pair");
        return Err(Error::CertificateInvalid {
            s: p.s,
            t: p.t,
            gap: p.gap,
        });
    }
    Ok(())
}

/// First grid index the tail from `t_start` needs: the nearest grid point
/// if it lies left of `t_start`.
pub(crate) fn tail_start_index(f: &SampledFunction, t_start: f64) -> usize {
    let near = f.nearest_index(t_start);
    let after = f.times().partition_point(|&t| t < t_start);
    near.min(after)
}

/// Nodes `t_start + n δ/2` up to `end`, read from the nearest grid points.
pub(crate) fn interpolant(
    f: &SampledFunction,
    t_start: f64,
    delta: f64,
    end: f64,
    domain_start: f64,
) -> Result<PiecewiseAffine> {
    let (nodes, values) = node_samples(f, t_start, delta, end);
    PiecewiseAffine::new(nodes, values, domain_start)
}

pub(crate) fn node_samples(f: &SampledFunction, t_start: f64, delta: f64, end: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    let mut n = 0u64;
    loop {
        let t = t_start + n as f64 * delta / 2.0;
        if t > end {
            break;
        }
        nodes.push(t);
        values.push(f.values()[f.nearest_index(t)]);
        n += 1;
    }
    (nodes, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeCheck {
    /// `max_deviation < eps`.
    pub inside: bool,
    pub max_deviation: f64,
    pub argmax: f64,
}

/// Largest `|f(t) − g(t)|` over grid points of `window`.
pub fn verify_tube(f: &SampledFunction, g: &PiecewiseAffine, eps: f64, window: &TailWindow) -> Result<TubeCheck> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    if window.start < g.domain_start() || window.end > g.domain_end() {
        return Err(Error::OutsideDomain {
            start: window.start,
            end: window.end,
            domain_start: g.domain_start(),
            domain_end: g.domain_end(),
        });
    }
    let range = f.window_indices(window, 1)?;
    let mut max_deviation = 0.0f64;
    let mut argmax = f.times()[range.start];
    for i in range {
        let t = f.times()[i];
        let d = (f.values()[i] - g.eval(t).expect("window inside the domain")).abs();
        if d > max_deviation {
            max_deviation = d;
            argmax = t;
        }
    }
    Ok(TubeCheck {
        inside: max_deviation < eps,
        max_deviation,
        argmax,
    })
}
