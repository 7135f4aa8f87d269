use serde::{Deserialize, Serialize};

use super::affine::PiecewiseAffine;
use super::tube::{node_samples, tail_start_index, tube_certificate};
use crate::detect::{detect_au, Status};
use crate::error::{Error, Result};
use crate::funcspace::{SampledFunction, TailWindow};
use crate::modulus::tail_modulus_profile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub k: usize,
    /// `eps / k`.
    pub epsilon_k: f64,
    /// `T_k`.
    pub t_start: f64,
    /// `T_{k+1}`, or the last node for the final stage.
    pub t_end: f64,
    pub delta_k: f64,
    /// `m` with `δ_k = δ_{k−1} / 2^m` (0 for the first stage).
    pub halving_exponent: u32,
    /// Largest `|slope|` of `u` on the stage.
    pub stage_lipschitz: f64,
    /// Largest `|f − u|` over grid points of `[T_k, T_{k+1}]`.
    pub max_residual: f64,
}

/// Why the decomposition stopped before `k_max` stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub stage: usize,
    pub reason: String,
}

/// `f = u + r` with `u` piecewise affine and `r` shrinking stage by stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct URDecomposition {
    pub epsilon: f64,
    pub u: PiecewiseAffine,
    pub stages: Vec<Stage>,
    /// `f − u` on grid points of `u`'s domain.
    pub r_samples: SampledFunction,
    pub truncated: Option<Truncation>,
}

struct StagePlan {
    t_start: f64,
    delta: f64,
    halving_exponent: u32,
}

/// Builds `u` stage by stage with `ε_k = eps/k`.
///
/// Stage `k` starts at the first node of stage `k−1` beyond `T_{k−1} + 1`
/// where `δ_k = δ_{k−1}/2^m` certifies `ω < ε_k/2` for the smallest `m`.
/// Before `T_1`, `u` is the constant `f(T_1)`.
pub fn ur_decompose(f: &SampledFunction, eps: f64, k_max: usize) -> Result<URDecomposition> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let window = f.full_window()?;
    let pre = detect_au(f, eps / (2.0 * k_max as f64), &window)?;
    if pre.status != Status::Holds {
        return Err(Error::NoCertificate {
            stage: 1,
            witness: pre.witness,
        });
    }
    let first = tube_certificate(f, eps)?;
    let Some(cert) = first.certificate.filter(|_| first.holds()) else {
        return Err(Error::NoCertificate {
            stage: 1,
            witness: first.witness,
        });
    };
    let mut plans = vec![StagePlan {
        t_start: cert.t_start,
        delta: cert.delta.expect("a.u. certificates carry delta"),
        halving_exponent: 0,
    }];
    let mut truncated = None;
    for k in 2..=k_max {
        let prev = plans.last().expect("first stage present");
        match next_stage(f, eps / k as f64, prev)? {
            Ok(plan) => plans.push(plan),
            Err(reason) => {
                truncated = Some(Truncation { stage: k, reason });
                break;
            }
        }
    }
    assemble(f, eps, &plans, truncated)
}

fn next_stage(f: &SampledFunction, eps_k: f64, prev: &StagePlan) -> Result<std::result::Result<StagePlan, String>> {
    let last = f.last_time();
    let step_floor = 4.0 * f.max_step_in(f.index_range(&TailWindow::new(prev.t_start, last)?));
    let (nodes, _) = node_samples(f, prev.t_start, prev.delta, last);
    let candidates: Vec<f64> = nodes.into_iter().filter(|&t| t > prev.t_start + 1.0).collect();
    if candidates.is_empty() {
        return Ok(Err(format!("no node beyond T = {} + 1 inside the window", prev.t_start)));
    }
    let base = tail_start_index(f, candidates[0]);
    let tail = TailWindow::new(f.times()[base], last)?;
    let mut profiles = Vec::new();
    let mut delta = prev.delta;
    while delta >= step_floor {
        profiles.push((delta, tail_modulus_profile(f, &tail, delta)?));
        delta /= 2.0;
    }
    for &t in &candidates {
        let start = tail_start_index(f, t);
        for (m, (delta, profile)) in profiles.iter().enumerate() {
            if t + delta / 2.0 > last {
                continue;
            }
            if profile[start - base] < eps_k / 2.0 {
                return Ok(Ok(StagePlan {
                    t_start: t,
                    delta: *delta,
                    halving_exponent: m as u32,
                }));
            }
        }
    }
    Ok(Err(format!(
        "no delta = {} / 2^m >= {step_floor} certifies eps_k / 2 = {} after T = {}",
        prev.delta,
        eps_k / 2.0,
        prev.t_start
    )))
}

fn assemble(f: &SampledFunction, eps: f64, plans: &[StagePlan], truncated: Option<Truncation>) -> Result<URDecomposition> {
    let last = f.last_time();
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    let mut bounds = Vec::with_capacity(plans.len());
    for (i, plan) in plans.iter().enumerate() {
        let end = plans.get(i + 1).map_or(last, |p| p.t_start);
        let (n, v) = node_samples(f, plan.t_start, plan.delta, end);
        // Stage boundaries are shared nodes.
        let skip = usize::from(!nodes.is_empty());
        nodes.extend_from_slice(&n[skip..]);
        values.extend_from_slice(&v[skip..]);
        bounds.push((plan.t_start, *n.last().expect("stage has nodes")));
    }
    let u = PiecewiseAffine::new(nodes, values, f.first_time())?;

    let range = f.index_range(&TailWindow::new(f.first_time(), u.domain_end())?);
    let times = &f.times()[range.clone()];
    let residual: Vec<f64> = times
        .iter()
        .zip(&f.values()[range.clone()])
        .map(|(&t, v)| v - u.eval(t).expect("inside the domain"))
        .collect();
    let tags = f.tags()[range].to_vec();
    let r_samples = SampledFunction::with_tags(times.to_vec(), residual, tags)?;

    let stages = plans
        .iter()
        .zip(&bounds)
        .enumerate()
        .map(|(i, (plan, &(t0, t1)))| {
            let part = r_samples.index_range(&TailWindow { start: t0, end: t1 });
            let lip = u
                .nodes()
                .windows(2)
                .zip(u.slopes())
                .filter(|(w, _)| w[0] >= t0 && w[1] <= t1)
                .fold(0.0f64, |m, (_, s)| m.max(s.abs()));
            Stage {
                k: i + 1,
                epsilon_k: eps / (i + 1) as f64,
                t_start: t0,
                t_end: t1,
                delta_k: plan.delta,
                halving_exponent: plan.halving_exponent,
                stage_lipschitz: lip,
                max_residual: r_samples.max_abs_in(part),
            }
        })
        .collect();
    Ok(URDecomposition {
        epsilon: eps,
        u,
        stages,
        r_samples,
        truncated,
    })
}
