//! Command-line surface: argument structs and their execution.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use asymptote_core::construct::{
    build_lipschitz_approximant, piecewise_lipschitz_check, tube_certificate, ur_decompose, verify_tube,
    TailCertificate,
};
use asymptote_core::detect::{
    check_theorem_with, croft_test, detect_au, detect_limit, detect_uc, detect_vanishing, golden_t_values, Channels,
    TheoremCase, TheoremOptions,
};
use asymptote_core::richardson::{richardson_derivative, TaylorCoefficients};
use asymptote_core::{Error as CoreError, GalleryFunction, GalleryKind, PointTag, SampledFunction, TailWindow};

use crate::ingest::{ingest, write_csv, TrajectoryFile};
use crate::report::{CommandEcho, GridMeta, Report, ReportStatus};

#[derive(Debug, Parser)]
#[command(name = "asymptote", version, about = "Finite-window analysis of asymptotically uniform functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Verdict on one property of a trajectory.
    Analyze(AnalyzeArgs),
    /// Empirical check of a theorem on a trajectory and its derivative channels.
    Theorem(TheoremArgs),
    /// Piecewise-affine approximant inside the eps-tube.
    Approx(ApproxArgs),
    /// Staged (u, r) decomposition.
    Decompose(DecomposeArgs),
    /// Dyadic elimination algebra or derivative estimate.
    Richardson(RichardsonArgs),
    /// Sequence tests f(n t) -> 0.
    Croft(CroftArgs),
    /// Export a gallery function as CSV.
    Gallery(GalleryArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Theorem(_) => "theorem",
            Command::Approx(_) => "approx",
            Command::Decompose(_) => "decompose",
            Command::Richardson(_) => "richardson",
            Command::Croft(_) => "croft",
            Command::Gallery(_) => "gallery",
        }
    }

    /// Where the report goes; `None` means stdout.
    pub fn report_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Analyze(a) => a.out.as_ref(),
            Command::Theorem(a) => a.out.as_ref(),
            Command::Approx(a) => a.out.as_ref(),
            Command::Decompose(a) => a.out.as_ref(),
            Command::Richardson(a) => a.out.as_ref(),
            Command::Croft(a) => a.out.as_ref(),
            Command::Gallery(_) => None,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// CSV file with columns `t,<channels>[,tag]`.
    #[arg(long)]
    pub input: PathBuf,
    /// Channel to analyze (default `f`, else the first column).
    #[arg(long)]
    pub channel: Option<String>,
    /// Window start (default: first grid time).
    #[arg(long)]
    pub from: Option<f64>,
    /// Window end (default: last grid time).
    #[arg(long)]
    pub to: Option<f64>,
}

impl InputArgs {
    fn load(&self) -> Result<TrajectoryFile> {
        Ok(ingest(&self.input)?)
    }

    fn window(&self, f: &SampledFunction) -> Result<TailWindow> {
        Ok(TailWindow::new(
            self.from.unwrap_or(f.first_time()),
            self.to.unwrap_or(f.last_time()),
        )?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyArg {
    Au,
    Uc,
    Limit,
    Vanishes,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub property: PropertyArg,
    #[arg(long)]
    pub eps: f64,
    /// Report destination (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseArg {
    Differential,
    Integral,
    Hadamard,
    HigherOrder,
    HardyLittlewood,
}

impl From<CaseArg> for TheoremCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Differential => TheoremCase::Differential,
            CaseArg::Integral => TheoremCase::Integral,
            CaseArg::Hadamard => TheoremCase::Hadamard,
            CaseArg::HigherOrder => TheoremCase::HigherOrder,
            CaseArg::HardyLittlewood => TheoremCase::HardyLittlewood,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TheoremArgs {
    /// The other columns are channels: df, d2f, …, g, h.
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long)]
    pub eps: f64,
    /// Derivative order n.
    #[arg(long)]
    pub order: Option<usize>,
    /// Derive absent derivative channels by central differences.
    #[arg(long)]
    pub derive_missing: bool,
    /// Boundedness proxy factor over the median.
    #[arg(long, default_value_t = 1e6)]
    pub bound_factor: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub eps: f64,
    /// Tail start of the certificate; searched when omitted.
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Random pairs for the Lipschitz check.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 5)]
    pub stages: usize,
    /// Include the residual samples in the report.
    #[arg(long)]
    pub with_residual: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RichardsonArgs {
    /// Scaled Taylor coefficients c1,…,cn.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "derive")]
    pub coeffs: Option<Vec<f64>>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Estimate f^(n)(t) from evaluations.
    #[arg(long)]
    pub derive: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Gallery function to differentiate.
    #[arg(long, conflicts_with = "input")]
    pub name: Option<GalleryKind>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
    /// CSV trajectory, evaluated by linear interpolation.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CroftArgs {
    #[arg(long, conflicts_with = "input")]
    pub name: Option<GalleryKind>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
    /// CSV trajectory, evaluated by linear interpolation.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub channel: Option<String>,
    /// `auto` (32 golden-ratio values) or a comma-separated list.
    #[arg(long, default_value = "auto")]
    pub t_values: String,
    /// Range for `auto` values: t = m·φ mod range.
    #[arg(long, default_value_t = 10.0)]
    pub t_range: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GalleryArgs {
    #[arg(long)]
    pub name: GalleryKind,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    /// Exact derivative columns df, d2f, … up to this order.
    #[arg(long, default_value_t = 0)]
    pub derivatives: usize,
    /// Keep `int` tags on grid points that are exact integers.
    #[arg(long)]
    pub tag_integers: bool,
    /// CSV destination; without it the CSV goes to stdout and no report is written.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A finished command: its report and, for `gallery` without `--out`, the CSV.
pub struct Execution {
    pub report: Report,
    pub csv: Option<String>,
}

pub fn execute(cmd: &Command) -> Execution {
    let echo = CommandEcho {
        name: cmd.name().to_string(),
        args: match cmd {
            Command::Analyze(a) => to_value(a),
            Command::Theorem(a) => to_value(a),
            Command::Approx(a) => to_value(a),
            Command::Decompose(a) => to_value(a),
            Command::Richardson(a) => to_value(a),
            Command::Croft(a) => to_value(a),
            Command::Gallery(a) => to_value(a),
        },
    };
    let outcome = match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Theorem(a) => theorem(a),
        Command::Approx(a) => approx(a),
        Command::Decompose(a) => decompose(a),
        Command::Richardson(a) => richardson(a),
        Command::Croft(a) => croft(a),
        Command::Gallery(a) => gallery(a),
    };
    match outcome {
        Ok(o) => Execution {
            report: Report::new(echo, o.grid, o.status, o.result),
            csv: o.csv,
        },
        Err(e) => Execution {
            report: Report::new(echo, None, ReportStatus::Error, error_value(&e)),
            csv: None,
        },
    }
}

struct Outcome {
    grid: Option<GridMeta>,
    status: ReportStatus,
    result: Value,
    csv: Option<String>,
}

impl Outcome {
    fn new(grid: Option<GridMeta>, status: ReportStatus, result: Value) -> Self {
        Self {
            grid,
            status,
            result,
            csv: None,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn error_value(e: &anyhow::Error) -> Value {
    let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
    let witness = e.chain().find_map(|c| match c.downcast_ref::<CoreError>() {
        Some(CoreError::NoCertificate { witness, .. }) => witness.map(|w| to_value(&w)),
        Some(CoreError::CertificateInvalid { s, t, gap }) => Some(json!({ "s": s, "t": t, "gap": gap })),
        _ => None,
    });
    json!({ "error": chain.join(": "), "witness": witness })
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome> {
    let traj = a.input.load()?;
    let (name, f) = traj.primary(a.input.channel.as_deref())?;
    let w = a.input.window(f)?;
    let verdict = match a.property {
        PropertyArg::Au => detect_au(f, a.eps, &w)?,
        PropertyArg::Uc => detect_uc(f, a.eps, &w)?,
        PropertyArg::Limit => detect_limit(f, &w, a.eps)?,
        PropertyArg::Vanishes => detect_vanishing(f, &w, a.eps)?,
    };
    let recheck = verdict.recheck(f)?;
    Ok(Outcome::new(
        Some(GridMeta::of(f)),
        verdict.status.into(),
        json!({ "channel": name, "verdict": verdict, "recheck": recheck }),
    ))
}

fn theorem(a: &TheoremArgs) -> Result<Outcome> {
    let traj = a.input.load()?;
    let (name, f) = traj.primary(a.input.channel.as_deref())?;
    let channels: Channels = traj
        .channels
        .iter()
        .filter(|(n, _)| n != name)
        .map(|(n, c)| (n.clone(), c.clone()))
        .collect();
    let opts = TheoremOptions {
        order: a.order,
        derive_missing: a.derive_missing,
        bound_factor: a.bound_factor,
        window: Some(a.input.window(f)?),
    };
    let report = check_theorem_with(a.case.into(), f, &channels, a.eps, &opts)?;
    let status = if report.consistent {
        ReportStatus::Ok
    } else {
        ReportStatus::Refuted
    };
    Ok(Outcome::new(Some(GridMeta::of(f)), status, to_value(&report)))
}

fn approx(a: &ApproxArgs) -> Result<Outcome> {
    let traj = a.input.load()?;
    let (name, f) = traj.primary(a.input.channel.as_deref())?;
    let cert = match (a.t_start, a.delta) {
        (Some(t), Some(d)) => TailCertificate::new(t, d),
        (None, None) => {
            let v = tube_certificate(f, a.eps)?;
            match v.certificate.filter(|_| v.holds()) {
                Some(c) => TailCertificate::new(c.t_start, c.delta.expect("a.u. certificates carry delta")),
                None => {
                    return Ok(Outcome::new(
                        Some(GridMeta::of(f)),
                        v.status.into(),
                        json!({ "channel": name, "certificate_search": v }),
                    ))
                }
            }
        }
        _ => bail!("--T and --delta go together"),
    };
    let g = build_lipschitz_approximant(f, a.eps, cert)?;
    let tube = verify_tube(f, &g, a.eps, &TailWindow::new(cert.t_start, g.domain_end())?)?;
    let lipschitz = piecewise_lipschitz_check(&g, a.trials, a.seed);
    let drift = g.drift_violations(f.times());
    let status = if tube.inside && drift == 0 && lipschitz.verified {
        ReportStatus::Holds
    } else {
        ReportStatus::Refuted
    };
    Ok(Outcome::new(
        Some(GridMeta::of(f)),
        status,
        json!({
            "channel": name,
            "certificate": cert,
            "slope_bound": a.eps / cert.delta,
            "approximant": g,
            "tube": tube,
            "lipschitz": lipschitz,
            "drift_violations": drift,
        }),
    ))
}

fn decompose(a: &DecomposeArgs) -> Result<Outcome> {
    let traj = a.input.load()?;
    let (name, f) = traj.primary(a.input.channel.as_deref())?;
    let d = ur_decompose(f, a.eps, a.stages)?;
    let within = d.stages.iter().all(|s| s.max_residual < s.epsilon_k);
    let status = match (within, &d.truncated) {
        (false, _) => ReportStatus::Refuted,
        (true, Some(_)) => ReportStatus::Inconclusive,
        (true, None) => ReportStatus::Ok,
    };
    let mut result = json!({
        "channel": name,
        "epsilon": d.epsilon,
        "stages": d.stages,
        "truncated": d.truncated,
        "u": d.u,
        "residual_max": d.r_samples.max_abs(),
    });
    if a.with_residual {
        result["r_samples"] = to_value(&d.r_samples);
    }
    Ok(Outcome::new(Some(GridMeta::of(f)), status, result))
}

fn richardson(a: &RichardsonArgs) -> Result<Outcome> {
    if let Some(c) = &a.coeffs {
        let coeffs = TaylorCoefficients::new(c.clone())?;
        let n = coeffs.order();
        let (last, table) = coeffs.eliminate_full();
        let mut result = json!({
            "coefficients": coeffs,
            "final_coefficient": last,
            "closed_form": coeffs.get(n) * table.kappa,
            "table": table,
        });
        if let Some(h) = a.h {
            result["h"] = json!(h);
            result["remainder"] = json!(coeffs.remainder_poly(h)?);
            result["final_value"] = json!(last * h.powi(n as i32));
        } else {
            result["final_value"] = json!(last);
        }
        return Ok(Outcome::new(None, ReportStatus::Ok, result));
    }
    if !a.derive {
        bail!("give --coeffs or --derive");
    }
    let (n, t, h) = match (a.n, a.t, a.h) {
        (Some(n), Some(t), Some(h)) => (n, t, h),
        _ => bail!("--derive needs --n, --t and --h"),
    };
    let (estimate, exact, grid) = match (&a.name, &a.input) {
        (Some(kind), None) => {
            let g = GalleryFunction::new(*kind, a.params.clone())?;
            let est = richardson_derivative(|x| g.eval_auto_tag(x).unwrap_or(f64::NAN), t, h, n)?;
            (est, g.derivative(t, n), None)
        }
        (None, Some(path)) => {
            let traj = ingest(path)?;
            let (_, f) = traj.primary(a.channel.as_deref())?;
            let est = richardson_derivative(|x| f.interpolate(x).unwrap_or(f64::NAN), t, h, n)?;
            (est, None, Some(GridMeta::of(f)))
        }
        _ => bail!("--derive needs exactly one of --name or --input"),
    };
    let status = if estimate.flagged {
        ReportStatus::Inconclusive
    } else {
        ReportStatus::Ok
    };
    Ok(Outcome::new(
        grid,
        status,
        json!({
            "method": "dyadic elimination used as a derivative estimator",
            "n": n,
            "t": t,
            "h": h,
            "estimate": estimate,
            "exact": exact,
            "error": exact.map(|e| (estimate.value - e).abs()),
        }),
    ))
}

fn croft(a: &CroftArgs) -> Result<Outcome> {
    let t_values = if a.t_values.trim() == "auto" {
        golden_t_values(32, a.t_range)
    } else {
        a.t_values
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| anyhow!("bad t-value `{s}`")))
            .collect::<Result<Vec<_>>>()?
    };
    let report = match (&a.name, &a.input) {
        (Some(kind), None) => {
            let g = GalleryFunction::new(*kind, a.params.clone())?;
            croft_test(|x| g.eval_auto_tag(x), &t_values, a.n_max, a.eps)?
        }
        (None, Some(path)) => {
            let traj = ingest(path)?;
            let (_, f) = traj.primary(a.channel.as_deref())?;
            croft_test(
                |x| f.interpolate(x).ok_or(CoreError::NotRepresentable(x)),
                &t_values,
                a.n_max,
                a.eps,
            )?
        }
        _ => bail!("give exactly one of --name or --input"),
    };
    let status = if report.cstar {
        ReportStatus::Holds
    } else {
        ReportStatus::Refuted
    };
    Ok(Outcome::new(None, status, to_value(&report)))
}

fn gallery(a: &GalleryArgs) -> Result<Outcome> {
    let g = GalleryFunction::new(a.name, a.params.clone())?;
    let sampled = g.sample(&TailWindow::new(a.from, a.to)?, a.step)?;
    let tags: Vec<Option<PointTag>> = sampled
        .tags()
        .iter()
        .map(|t| t.filter(|t| a.tag_integers || !t.is_integer()))
        .collect();
    let with_tags = tags.iter().any(Option::is_some);
    let f = SampledFunction::with_tags(sampled.times().to_vec(), sampled.values().to_vec(), tags)?;
    let mut channels = vec![("f".to_string(), f.clone())];
    for k in 1..=a.derivatives {
        let d = g
            .derivative_samples(&f, k)
            .ok_or_else(|| anyhow!("{} has no closed-form derivative of order {k}", a.name))?;
        channels.push((asymptote_core::detect::derivative_channel(k), d));
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, &channels, with_tags)?;
    let csv = String::from_utf8(buf)?;
    let columns: Vec<&str> = channels.iter().map(|(n, _)| n.as_str()).collect();
    let result = json!({
        "name": a.name.name(),
        "params": g.params,
        "labels": g.labels(),
        "columns": columns,
        "path": a.out,
    });
    let mut outcome = Outcome::new(Some(GridMeta::of(&f)), ReportStatus::Ok, result);
    match &a.out {
        Some(path) => std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
        None => outcome.csv = Some(csv),
    }
    Ok(outcome)
}
