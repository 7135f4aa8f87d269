//! Cauchy-style tail tests: convergence and vanishing on a finite window.

use super::verdict::{min_max, slack, Certificate, Property, Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::funcspace::{SampledFunction, TailWindow};

#[derive(Clone, Copy)]
pub(crate) enum TailStat {
    /// `max − min` over the region.
    Oscillation,
    /// `max |f|` over the region.
    Magnitude,
}

/// Regions for a tail test. The statistic must be below `eps` on `hold`
/// for `Holds`, and at least `eps` on `refute` for `Refuted`.
pub(crate) struct TailRegions {
    pub hold: TailWindow,
    pub refute: TailWindow,
}

impl TailRegions {
    /// Final half for `Holds`, final quarter for `Refuted`.
    pub fn halves(window: &TailWindow) -> Result<Self> {
        Ok(Self {
            hold: window.with_start(window.at_fraction(0.5))?,
            refute: window.with_start(window.at_fraction(0.75))?,
        })
    }

    /// `hold = [start, end]`, `refute` its second half.
    pub fn from(start: f64, end: f64) -> Result<Self> {
        let hold = TailWindow::new(start, end)?;
        Ok(Self {
            refute: hold.with_start(hold.at_fraction(0.5))?,
            hold,
        })
    }
}

pub(crate) fn tail_test(
    f: &SampledFunction,
    window: &TailWindow,
    regions: &TailRegions,
    eps: f64,
    stat: TailStat,
) -> Result<Verdict> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let property = match stat {
        TailStat::Oscillation => Property::LimitExists,
        TailStat::Magnitude => Property::Vanishes,
    };
    let all = f.window_indices(window, 2)?;
    let hold = f.window_indices(&regions.hold, 3)?;
    let resolution = f.max_step_in(all.clone());
    let eta = slack(f, all);
    let times = f.times();
    let values = f.values();

    let hold_stat = match stat {
        TailStat::Oscillation => {
            let (lo, hi) = min_max(&values[hold.clone()]);
            hi - lo
        }
        TailStat::Magnitude => f.max_abs_in(hold.clone()),
    };
    if hold_stat < eps - eta {
        let refute = f.index_range(&regions.refute);
        let estimate = match stat {
            TailStat::Oscillation => {
                let tail = if refute.is_empty() { hold.clone() } else { refute };
                values[tail.clone()].iter().sum::<f64>() / tail.len() as f64
            }
            TailStat::Magnitude => 0.0,
        };
        return Ok(Verdict {
            property,
            status: Status::Holds,
            epsilon: eps,
            certificate: Some(Certificate {
                epsilon: eps,
                t_start: times[hold.start],
                t_end: regions.hold.end,
                delta: None,
                limit_estimate: Some(estimate),
            }),
            witness: None,
            window: *window,
            resolution,
            notes: format!("tail statistic {hold_stat:e} on [{}, {}]", times[hold.start], regions.hold.end),
        });
    }

    let refute = f.index_range(&regions.refute);
    if refute.len() >= 2 {
        let witness = match stat {
            TailStat::Oscillation => {
                let (imin, imax) = refute.clone().fold((refute.start, refute.start), |(a, b), i| {
                    (
                        if values[i] < values[a] { i } else { a },
                        if values[i] > values[b] { i } else { b },
                    )
                });
                let (i, j) = if imin < imax { (imin, imax) } else { (imax, imin) };
                Witness {
                    s: times[i],
                    t: times[j],
                    gap: (values[j] - values[i]).abs(),
                    delta: None,
                }
            }
            TailStat::Magnitude => {
                let i = refute
                    .clone()
                    .fold(refute.start, |b, i| if values[i].abs() > values[b].abs() { i } else { b });
                Witness {
                    s: times[i],
                    t: times[i],
                    gap: values[i].abs(),
                    delta: None,
                }
            }
        };
        if witness.gap >= eps {
            return Ok(Verdict {
                property,
                status: Status::Refuted,
                epsilon: eps,
                certificate: None,
                witness: Some(witness),
                window: *window,
                resolution,
                notes: format!("statistic stays >= eps on [{}, {}]", regions.refute.start, regions.refute.end),
            });
        }
    }
    Ok(Verdict::inconclusive(
        property,
        eps,
        *window,
        resolution,
        format!("statistic {hold_stat:e} >= eps on the hold region but not persistent"),
    ))
}

/// Convergence verdict: `Holds` when the oscillation over the final half of
/// the window is below `eps`, `Refuted` when even the final quarter
/// oscillates by at least `eps`, `Inconclusive` otherwise.
pub fn detect_limit(f: &SampledFunction, window: &TailWindow, eps: f64) -> Result<Verdict> {
    tail_test(f, window, &TailRegions::halves(window)?, eps, TailStat::Oscillation)
}

/// Convergence to zero, with the same regions as [`detect_limit`] applied to `|f|`.
pub fn detect_vanishing(f: &SampledFunction, window: &TailWindow, eps: f64) -> Result<Verdict> {
    tail_test(f, window, &TailRegions::halves(window)?, eps, TailStat::Magnitude)
}
