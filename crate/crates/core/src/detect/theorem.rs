//! Empirical checks of the theorems linking convergence of `f`, asymptotic
//! uniformity of a derivative or integrand, and vanishing of derivatives.
//!
//! A report carries two layers. The plain layer evaluates each hypothesis
//! and conclusion at the user's `eps` on the whole window. The implication
//! layer re-evaluates hypotheses at tolerances strong enough that, by a
//! Taylor or integral estimate, a true theorem cannot yield a refuted
//! conclusion; only this layer decides `consistent`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::au::detect_au;
use super::au::{au_search, AuSearch};
use super::hl::ratio_values;
use super::tail::{detect_limit, detect_vanishing, tail_test, TailRegions, TailStat};
use super::verdict::{Certificate, Property, Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::funcspace::{SampledFunction, TailWindow};
use crate::richardson::DyadicWeights;

/// Fraction of the admissible tolerance actually used for a premise.
const SAFETY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCase {
    Differential,
    Integral,
    Hadamard,
    HigherOrder,
    HardyLittlewood,
}

impl TheoremCase {
    pub const ALL: [TheoremCase; 5] = [
        TheoremCase::Differential,
        TheoremCase::Integral,
        TheoremCase::Hadamard,
        TheoremCase::HigherOrder,
        TheoremCase::HardyLittlewood,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremCase::Differential => "differential",
            TheoremCase::Integral => "integral",
            TheoremCase::Hadamard => "hadamard",
            TheoremCase::HigherOrder => "higher_order",
            TheoremCase::HardyLittlewood => "hardy_littlewood",
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        TheoremCase::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// A verdict together with the statement it was issued for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub subject: String,
    pub verdict: Verdict,
}

impl Claim {
    fn new(subject: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            subject: subject.into(),
            verdict,
        }
    }

    fn status(&self) -> Status {
        self.verdict.status
    }
}

/// One direction of a theorem, evaluated at matched tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Implication {
    pub label: String,
    pub hypotheses: Vec<Claim>,
    pub conclusions: Vec<Claim>,
    /// False only if every hypothesis holds and some conclusion is refuted.
    pub consistent: bool,
}

impl Implication {
    fn new(label: impl Into<String>, hypotheses: Vec<Claim>, conclusions: Vec<Claim>) -> Self {
        let consistent = !(hypotheses.iter().all(|c| c.status() == Status::Holds)
            && conclusions.iter().any(|c| c.status() == Status::Refuted));
        Self {
            label: label.into(),
            hypotheses,
            conclusions,
            consistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub case: TheoremCase,
    /// Derivative order `n` the case was run with.
    pub order: usize,
    pub epsilon: f64,
    pub hypothesis_verdicts: Vec<Claim>,
    pub conclusion_verdicts: Vec<Claim>,
    pub implications: Vec<Implication>,
    /// Every implication is consistent.
    pub consistent: bool,
    /// Channels computed by finite differences rather than supplied.
    pub derived_channels: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremOptions {
    /// Derivative order; defaults to 1 for the differential case and 2 otherwise.
    pub order: Option<usize>,
    /// Derive absent derivative channels by central differences. The
    /// differential case always derives `df`.
    pub derive_missing: bool,
    /// Boundedness proxy: sup over the final half at most this times the median.
    pub bound_factor: f64,
    pub window: Option<TailWindow>,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self {
            order: None,
            derive_missing: false,
            bound_factor: 1e6,
            window: None,
        }
    }
}

/// Named extra channels: `df`, `d2f`, `d3f`, …, `g`, `h`.
pub type Channels = BTreeMap<String, SampledFunction>;

/// Channel name of the `k`-th derivative.
pub fn derivative_channel(k: usize) -> String {
    if k == 1 {
        "df".to_string()
    } else {
        format!("d{k}f")
    }
}

pub fn check_theorem(case: TheoremCase, f: &SampledFunction, channels: &Channels, eps: f64) -> Result<TheoremReport> {
    check_theorem_with(case, f, channels, eps, &TheoremOptions::default())
}

pub fn check_theorem_with(
    case: TheoremCase,
    f: &SampledFunction,
    channels: &Channels,
    eps: f64,
    opts: &TheoremOptions,
) -> Result<TheoremReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    if channels.values().any(|c| !c.same_grid(f)) {
        return Err(Error::GridMismatch);
    }
    let window = match opts.window {
        Some(w) => w,
        None => f.full_window()?,
    };
    let order = opts.order.unwrap_or(match case {
        TheoremCase::Differential => 1,
        _ => 2,
    });
    let mut ctx = Context {
        f,
        channels,
        window,
        eps,
        derive: opts.derive_missing || case == TheoremCase::Differential,
        derived: Vec::new(),
        cache: BTreeMap::new(),
        detail: Vec::new(),
        slop: f.max_step_in(f.index_range(&window)),
    };
    let (hyps, concs, implications) = match case {
        TheoremCase::Differential => {
            if order != 1 {
                return Err(Error::InvalidArgument("the differential case has order 1".into()));
            }
            ctx.higher_order(1)?
        }
        TheoremCase::HigherOrder => {
            if order == 0 {
                return Err(Error::InvalidArgument("order must be at least 1".into()));
            }
            ctx.higher_order(order)?
        }
        TheoremCase::Integral => ctx.integral()?,
        TheoremCase::Hadamard => {
            if order < 2 {
                return Err(Error::InvalidArgument("the hadamard case needs order at least 2".into()));
            }
            ctx.hadamard(order, opts.bound_factor)?
        }
        TheoremCase::HardyLittlewood => ctx.hardy_littlewood(opts.bound_factor)?,
    };
    Ok(TheoremReport {
        case,
        order: if case == TheoremCase::Integral { 0 } else { order },
        epsilon: eps,
        hypothesis_verdicts: hyps,
        conclusion_verdicts: concs,
        consistent: implications.iter().all(|i| i.consistent),
        implications,
        derived_channels: ctx.derived,
        detail: ctx.detail.join("; "),
    })
}

type Layers = (Vec<Claim>, Vec<Claim>, Vec<Implication>);

struct Context<'a> {
    f: &'a SampledFunction,
    channels: &'a Channels,
    window: TailWindow,
    eps: f64,
    derive: bool,
    derived: Vec<String>,
    cache: BTreeMap<usize, SampledFunction>,
    detail: Vec<String>,
    /// Largest grid gap in the window.
    slop: f64,
}

impl Context<'_> {
    fn derivative(&mut self, k: usize) -> Result<SampledFunction> {
        if k == 0 {
            return Ok(self.f.clone());
        }
        if let Some(c) = self.cache.get(&k) {
            return Ok(c.clone());
        }
        let name = derivative_channel(k);
        let given = self
            .channels
            .get(&name)
            .or_else(|| (k == 1).then(|| self.channels.get("d1f")).flatten());
        let c = match given {
            Some(c) => c.clone(),
            None if self.derive => {
                let prev = self.derivative(k - 1)?;
                self.derived.push(name);
                prev.derivative()?
            }
            None => return Err(Error::MissingChannel(name)),
        };
        self.cache.insert(k, c.clone());
        Ok(c)
    }

    fn mid(&self) -> f64 {
        self.window.at_fraction(0.5)
    }

    fn upper_half(&self) -> Result<TailWindow> {
        self.window.with_start(self.mid())
    }

    /// Starts `region` one grid point earlier, so differences taken at its
    /// first point stay inside.
    fn widened(&self, region: &TailWindow) -> Result<TailWindow> {
        let times = self.f.times();
        let i = times.partition_point(|&t| t < region.start);
        let start = if i > 0 { times[i - 1].max(self.window.start) } else { region.start };
        TailWindow::new(start, region.end)
    }

    fn conclusion_region(&self, start: f64, h: f64) -> Option<TailWindow> {
        TailWindow::new(start, self.window.end - h).ok()
    }

    fn vanishing_claims(&mut self, orders: std::ops::RangeInclusive<usize>, eps: f64) -> Result<Vec<Claim>> {
        let mut out = Vec::new();
        for k in orders {
            let d = self.derivative(k)?;
            out.push(Claim::new(
                format!("{} vanishes", derivative_channel(k)),
                detect_vanishing(&d, &self.window, eps)?,
            ));
        }
        Ok(out)
    }

    /// `n`-th order case; `n = 1` is the differential case.
    fn higher_order(&mut self, n: usize) -> Result<Layers> {
        let eps = self.eps;
        let w = self.window;
        let top = self.derivative(n)?;
        let name = derivative_channel(n);
        let hyps = vec![
            Claim::new("f converges", detect_limit(self.f, &w, eps)?),
            Claim::new(format!("{name} is a.u."), detect_au(&top, eps, &w)?),
        ];
        let concs = self.vanishing_claims(1..=n, eps)?;

        let mut implications = Vec::new();
        for uniform in [false, true] {
            implications.push(self.forward_higher(n, &top, uniform, &concs)?);
        }

        // Converse: vanishing derivatives make the top one a.u. on the final half.
        let mut back_hyps = vec![hyps[0].clone()];
        back_hyps.extend(self.vanishing_claims(1..=n, eps / 2.0)?);
        let upper = self.upper_half()?;
        let back = Implication::new(
            format!("f converges and d1f..{name} vanish => {name} is a.u."),
            back_hyps,
            vec![Claim::new(format!("{name} is a.u. on the final half"), detect_au(&top, eps, &upper)?)],
        );
        implications.push(back);
        Ok((hyps, concs, implications))
    }

    fn forward_higher(&mut self, n: usize, top: &SampledFunction, uniform: bool, plain: &[Claim]) -> Result<Implication> {
        let eps = self.eps;
        let name = derivative_channel(n);
        let bound = TaylorBound::new(n, n);
        let eps_au = eps / (2.0 * bound.weights.abs_row_moment(n, n));
        let kind = if uniform { "uniformly continuous" } else { "a.u." };
        let search = AuSearch {
            uniform,
            ..AuSearch::default()
        };
        let au = au_search(top, eps_au, &self.window, search)?;
        let label = format!("f converges and {name} is {kind} => d1f..{name} vanish");
        let au_claim = Claim::new(format!("{name} is {kind} at {eps_au:e}"), au.clone());
        let Some(cert) = au.certificate.filter(|_| au.holds()) else {
            let skip = Verdict::inconclusive(
                Property::LimitExists,
                eps,
                self.window,
                self.slop,
                format!("{name} is not certified {kind}; no matched tolerance"),
            );
            return Ok(Implication::new(
                label,
                vec![Claim::new("f converges (matched tolerance)", skip), au_claim],
                plain.to_vec(),
            ));
        };
        let delta = cert.delta.expect("a.u. certificates carry delta");
        let start = cert.t_start.max(self.mid());
        let ladder = halvings(delta, 4.0 * self.slop);
        let chosen = bound.best(eps, eps_au, &ladder, self.slop);
        let region = TailWindow::new(start, self.window.end).ok();
        let (conv, h) = match (chosen, region) {
            (Some((h, eta)), Some(region)) if self.conclusion_region(start, h).is_some() => {
                self.detail.push(format!("{kind} {name}: eps_au = {eps_au:e}, h = {h:e}, eta = {eta:e}"));
                (self.limit_on(&self.widened(&region)?, eta)?, Some(h))
            }
            _ => (
                Verdict::inconclusive(
                    Property::LimitExists,
                    eps,
                    self.window,
                    self.slop,
                    "no positive matched tolerance on this window",
                ),
                None,
            ),
        };
        let hyps = vec![Claim::new("f converges (matched tolerance)", conv), au_claim];
        let concs = match h.and_then(|h| self.conclusion_region(start, h)) {
            Some(region) => {
                let mut out = Vec::new();
                for k in 1..=n {
                    let d = self.derivative(k)?;
                    out.push(Claim::new(
                        format!("{} vanishes on [{}, {}]", derivative_channel(k), region.start, region.end),
                        vanish_on(&d, &region, eps)?,
                    ));
                }
                out
            }
            None => plain.to_vec(),
        };
        Ok(Implication::new(label, hyps, concs))
    }

    fn integral(&mut self) -> Result<Layers> {
        let eps = self.eps;
        let w = self.window;
        let g = self.channels.get("g").unwrap_or(self.f).clone();
        let big = g.cumulative_integral()?;
        let hyps = vec![
            Claim::new("integral of g converges", detect_limit(&big, &w, eps)?),
            Claim::new("g is a.u.", detect_au(&g, eps, &w)?),
        ];
        let concs = vec![Claim::new("g vanishes", detect_vanishing(&g, &w, eps)?)];

        let label = "integral of g converges and g is a.u. => g vanishes";
        let au = detect_au(&g, eps / 2.0, &w)?;
        let au_claim = Claim::new(format!("g is a.u. at {:e}", eps / 2.0), au.clone());
        let forward = match au.certificate.filter(|_| au.holds()) {
            Some(cert) => {
                let delta = cert.delta.expect("a.u. certificates carry delta");
                let start = cert.t_start.max(self.mid());
                // |g(t)| ≥ eps forces |g| > eps/2 with one sign on [t, t+δ],
                // so the integral moves by more than eps (δ − step)/2 there.
                let eta = SAFETY * eps * (delta - self.slop) / 2.0;
                match (TailWindow::new(start, w.end), self.conclusion_region(start, delta)) {
                    (Ok(region), Some(target)) if eta > 0.0 => {
                        self.detail.push(format!("integral: delta = {delta:e}, eta = {eta:e}"));
                        Implication::new(
                            label,
                            vec![
                                Claim::new("integral of g converges (matched tolerance)", self.limit_on_of(&big, &region, eta)?),
                                au_claim,
                            ],
                            vec![Claim::new(
                                format!("g vanishes on [{}, {}]", target.start, target.end),
                                vanish_on(&g, &target, eps)?,
                            )],
                        )
                    }
                    _ => Implication::new(
                        label,
                        vec![
                            Claim::new(
                                "integral of g converges (matched tolerance)",
                                Verdict::inconclusive(Property::LimitExists, eps, w, self.slop, "window too short for the certificate"),
                            ),
                            au_claim,
                        ],
                        concs.clone(),
                    ),
                }
            }
            None => Implication::new(
                label,
                vec![
                    Claim::new(
                        "integral of g converges (matched tolerance)",
                        Verdict::inconclusive(Property::LimitExists, eps, w, self.slop, "g is not certified a.u."),
                    ),
                    au_claim,
                ],
                concs.clone(),
            ),
        };

        let upper = self.upper_half()?;
        let back = Implication::new(
            "integral of g converges and g vanishes => g is a.u.",
            vec![
                hyps[0].clone(),
                Claim::new(format!("g vanishes at {:e}", eps / 2.0), detect_vanishing(&g, &w, eps / 2.0)?),
            ],
            vec![Claim::new("g is a.u. on the final half", detect_au(&g, eps, &upper)?)],
        );
        Ok((hyps, concs, vec![forward, back]))
    }

    fn hadamard(&mut self, n: usize, factor: f64) -> Result<Layers> {
        let eps = self.eps;
        let w = self.window;
        let top = self.derivative(n)?;
        let name = derivative_channel(n);
        let (bounded, _) = bounded_proxy(&top, &self.upper_half()?, factor)?;
        let hyps = vec![
            Claim::new("f converges", detect_limit(self.f, &w, eps)?),
            Claim::new(format!("{name} is bounded"), bounded.clone()),
        ];
        let concs = self.vanishing_claims(1..=n - 1, eps)?;

        let region = self.upper_half()?;
        let sup = top.max_abs_in(top.index_range(&region));
        let bound = TaylorBound::new(n - 1, n);
        let ladder = halvings(region.span() / 2.0, 4.0 * self.slop);
        let label = format!("f converges and {name} is bounded => d1f..{} vanish", derivative_channel(n - 1));
        let chosen = bound.best(eps, sup, &ladder, self.slop);
        let target = chosen.and_then(|(h, _)| self.conclusion_region(region.start, h));
        let implication = match (chosen, target) {
            (Some((h, eta)), Some(target)) => {
                self.detail.push(format!("hadamard: sup |{name}| = {sup:e}, h = {h:e}, eta = {eta:e}"));
                let mut c = Vec::new();
                for k in 1..n {
                    let d = self.derivative(k)?;
                    c.push(Claim::new(
                        format!("{} vanishes on [{}, {}]", derivative_channel(k), target.start, target.end),
                        vanish_on(&d, &target, eps)?,
                    ));
                }
                Implication::new(
                    label,
                    vec![
                        Claim::new("f converges (matched tolerance)", self.limit_on(&self.widened(&region)?, eta)?),
                        Claim::new(format!("{name} is bounded"), bounded),
                    ],
                    c,
                )
            }
            _ => Implication::new(
                label,
                vec![
                    Claim::new(
                        "f converges (matched tolerance)",
                        Verdict::inconclusive(Property::LimitExists, eps, w, self.slop, format!("sup |{name}| = {sup:e} leaves no positive tolerance")),
                    ),
                    Claim::new(format!("{name} is bounded"), bounded),
                ],
                concs.clone(),
            ),
        };
        Ok((hyps, concs, vec![implication]))
    }

    /// The `g = 1`, `f → α` branch: `f̈ = O(h)` gives `ḟ = o(√(g h))`.
    fn hardy_littlewood(&mut self, factor: f64) -> Result<Layers> {
        let eps = self.eps;
        let w = self.window;
        let df = self.derivative(1)?;
        let d2f = self.derivative(2)?;
        let ones = self.f.map(|_| 1.0)?;
        let g = self.channels.get("g").cloned().unwrap_or_else(|| ones.clone());
        let h = self.channels.get("h").cloned().unwrap_or(ones);
        let ratio = df.with_values(ratio_values(&df, &g, &h)?)?;
        let scaled = d2f.with_values(d2f.values().iter().zip(h.values()).map(|(a, b)| a / b).collect())?;
        let upper = self.upper_half()?;
        let (bounded, _) = bounded_proxy(&scaled, &upper, factor)?;
        let hyps = vec![
            Claim::new("f converges", detect_limit(self.f, &w, eps)?),
            Claim::new("d2f / h is bounded", bounded.clone()),
        ];
        let concs = vec![Claim::new("df / sqrt(g h) vanishes", detect_vanishing(&ratio, &w, eps)?)];

        let range = d2f.index_range(&upper);
        let sup = d2f.max_abs_in(range.clone());
        let floor = (g.values()[range.start] * h.values()[range.start]).sqrt();
        let bound = TaylorBound::new(1, 2);
        let ladder = halvings(upper.span() / 2.0, 4.0 * self.slop);
        let chosen = bound.best(eps * floor, sup, &ladder, self.slop);
        let target = chosen.and_then(|(h, _)| self.conclusion_region(upper.start, h));
        let label = "f converges and d2f = O(h) => df = o(sqrt(g h))";
        let implication = match (chosen, target) {
            (Some((step, eta)), Some(target)) => {
                self.detail.push(format!("hardy-littlewood: sup |d2f| = {sup:e}, h = {step:e}, eta = {eta:e}"));
                Implication::new(
                    label,
                    vec![
                        Claim::new("f converges (matched tolerance)", self.limit_on(&self.widened(&upper)?, eta)?),
                        Claim::new("d2f / h is bounded", bounded),
                    ],
                    vec![Claim::new(
                        format!("df / sqrt(g h) vanishes on [{}, {}]", target.start, target.end),
                        vanish_on(&ratio, &target, eps)?,
                    )],
                )
            }
            _ => Implication::new(
                label,
                vec![
                    Claim::new(
                        "f converges (matched tolerance)",
                        Verdict::inconclusive(Property::LimitExists, eps, w, self.slop, "no positive matched tolerance"),
                    ),
                    Claim::new("d2f / h is bounded", bounded),
                ],
                concs.clone(),
            ),
        };
        Ok((hyps, concs, vec![implication]))
    }

    fn limit_on(&self, region: &TailWindow, eta: f64) -> Result<Verdict> {
        self.limit_on_of(self.f, region, eta)
    }

    fn limit_on_of(&self, f: &SampledFunction, region: &TailWindow, eta: f64) -> Result<Verdict> {
        if f.index_range(region).len() < 3 {
            return Ok(Verdict::inconclusive(Property::LimitExists, eta, *region, self.slop, "region too short"));
        }
        tail_test(f, region, &TailRegions::from(region.start, region.end)?, eta, TailStat::Oscillation)
    }
}

fn vanish_on(f: &SampledFunction, region: &TailWindow, eps: f64) -> Result<Verdict> {
    if f.index_range(region).len() < 3 {
        return Ok(Verdict::inconclusive(
            Property::Vanishes,
            eps,
            *region,
            f.max_step(),
            "region too short",
        ));
    }
    tail_test(f, region, &TailRegions::from(region.start, region.end)?, eps, TailStat::Magnitude)
}

/// `x, x/2, x/4, …` down to `floor`.
fn halvings(x: f64, floor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut h = x;
    while h >= floor && h > 0.0 && out.len() < 64 {
        out.push(h);
        h *= 0.5;
    }
    out
}

/// `sup |c|` over `region` against `factor ·` median `|c|` there.
fn bounded_proxy(c: &SampledFunction, region: &TailWindow, factor: f64) -> Result<(Verdict, f64)> {
    let range = c.window_indices(region, 1)?;
    let times = c.times();
    let values = &c.values()[range.clone()];
    let mut mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let median = mags[mags.len() / 2];
    let threshold = factor * median;
    let (imax, sup) = values
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, b), (i, v)| if v.abs() > b { (i, v.abs()) } else { (bi, b) });
    let resolution = c.max_step_in(range.clone());
    let verdict = if sup <= threshold {
        Verdict {
            property: Property::Bounded,
            status: Status::Holds,
            epsilon: threshold,
            certificate: Some(Certificate {
                epsilon: threshold,
                t_start: times[range.start],
                t_end: region.end,
                delta: None,
                limit_estimate: None,
            }),
            witness: None,
            window: *region,
            resolution,
            notes: format!("sup {sup:e} <= {factor:e} x median {median:e}"),
        }
    } else {
        let t = times[range.start + imax];
        Verdict {
            property: Property::Bounded,
            status: Status::Refuted,
            epsilon: threshold,
            certificate: None,
            witness: Some(Witness {
                s: t,
                t,
                gap: sup,
                delta: None,
            }),
            window: *region,
            resolution,
            notes: format!("sup {sup:e} > {factor:e} x median {median:e}"),
        }
    };
    Ok((verdict, sup))
}

/// Taylor estimate of `f^{(j)}(t)`, `j = 1..m`, from the oscillation of `f`
/// over `[t, t+h]` and a bound `rem` on the order-`p` remainder factor:
///
/// `|f^{(j)}(t)| ≤ j!/h^j · Σ_i |W_{j,i}| (osc + rem · (x_i h)^p / p!)`.
struct TaylorBound {
    weights: DyadicWeights,
    p: usize,
}

impl TaylorBound {
    fn new(m: usize, p: usize) -> Self {
        Self {
            weights: DyadicWeights::new(m),
            p,
        }
    }

    /// Largest oscillation keeping every `|f^{(j)}| < target`, times [`SAFETY`].
    fn admissible(&self, target: f64, rem: f64, h: f64, slop: f64) -> f64 {
        let he = h - 2.0 * slop;
        if he <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let p_fact = factorial(self.p);
        (1..=self.weights.unknowns())
            .map(|j| {
                let s = self.weights.abs_row_sum(j);
                let moment = self.weights.abs_row_moment(j, self.p);
                target * he.powi(j as i32) / (factorial(j) * s) - rem * h.powi(self.p as i32) * moment / (p_fact * s)
            })
            .fold(f64::INFINITY, f64::min)
            * SAFETY
    }

    /// Best `(h, η)` over the ladder, if any `η > 0`.
    fn best(&self, target: f64, rem: f64, ladder: &[f64], slop: f64) -> Option<(f64, f64)> {
        ladder
            .iter()
            .map(|&h| (h, self.admissible(target, rem, h, slop)))
            .filter(|&(_, eta)| eta > 0.0 && eta.is_finite())
            .fold(None, |best: Option<(f64, f64)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            })
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
