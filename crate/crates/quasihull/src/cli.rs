//! Command-line front end. Each command reads one JSON payload (the
//! `--config` file) and produces a report envelope plus CSV rows.
//!
//! Exit status: 0 on success, 2 on a domain error, 3 on a schema error
//! (bad flags, unreadable or malformed config, missing seed). Errors are
//! printed to stdout as `{"error": code, "message": ...}`.

use crate::ads3::{
    convex_hull_acausal, gluing_routes, mess_check, seeded_polygon, width, AcausalPolygon, EinPoint,
};
use crate::earthquake::{
    build_right_angled_polygon, check_polygon_claims, geodesic_space_distance, perturb_ultraparallel,
    reflection_orbit_lamination, restrictions_agree, thurston_norm_estimate, EarthquakeSpec, FiniteLamination, Leaf,
};
use crate::error::{Error, Result};
use crate::hyp3::{convex_hull_ideal, hyp_gluing_samples};
use crate::inverse_solver::{solve_gluing_inverse, ForwardOracle, OracleKind, SolveOptions};
use crate::io::{
    config_hash, gluing_csv, parse_handedness, real_cell, write_csv, CircleMapJson, HullAdsJson, HullH3Json,
    IdealPointsJson, LaminationJson, PolygonJson, RealJson, SolveConfigJson, WidthJson,
};
use crate::mobius::{qs_norm_estimate, CircleMap, CirclePoint, Interp, QuadrupleSampler};
use crate::VERSION;
use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    HullHyp,
    HullAds,
    Gluing,
    Width,
    Earthquake,
    Qsnorm,
    ApproxLam,
    MessCheck,
    SolveInverse,
    DegenerationStudy,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::HullHyp => "hull-hyp",
            Command::HullAds => "hull-ads",
            Command::Gluing => "gluing",
            Command::Width => "width",
            Command::Earthquake => "earthquake",
            Command::Qsnorm => "qsnorm",
            Command::ApproxLam => "approx-lam",
            Command::MessCheck => "mess-check",
            Command::SolveInverse => "solve-inverse",
            Command::DegenerationStudy => "degeneration-study",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "quasihull", version, about = "Convex hulls of quasicircles in H^3 and AdS^3 at finite scale")]
pub struct Cli {
    pub command: Command,
    /// JSON input for the command.
    #[arg(long)]
    pub config: PathBuf,
    /// Seed for randomized commands (overrides a "seed" field in the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance: pass threshold for mess-check (default 1e-8), stopping
    /// residual for solve-inverse (1e-9), restriction match for approx-lam
    /// (1e-9).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Directory for <command>.json and <command>.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for batch commands (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

/// Report envelope and CSV table of one run.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Value,
    pub csv: String,
}

fn parse<T: for<'de> Deserialize<'de>>(input: &Value) -> Result<T> {
    T::deserialize(input).map_err(|e| Error::Schema(e.to_string()))
}

fn seed_field(input: &Value) -> Option<u64> {
    input.get("seed").and_then(Value::as_u64)
}

fn require_seed(cmd: Command, opts: &RunOptions, input: &Value) -> Result<u64> {
    opts.seed
        .or_else(|| seed_field(input))
        .ok_or_else(|| Error::Schema(format!("{} needs a seed (--seed or a \"seed\" field)", cmd.name())))
}

/// Shortest round-trip form, with an exponent for very small or large
/// magnitudes.
fn f(x: f64) -> String {
    format!("{x:?}")
}

/// Runs one command on a parsed payload.
pub fn run(cmd: Command, input: &Value, opts: &RunOptions) -> Result<Output> {
    let seed = match cmd {
        Command::Qsnorm | Command::SolveInverse | Command::DegenerationStudy => Some(require_seed(cmd, opts, input)?),
        Command::MessCheck if input.get("random").is_some() => Some(require_seed(cmd, opts, input)?),
        _ => opts.seed.or_else(|| seed_field(input)),
    };
    let (result, csv) = match cmd {
        Command::HullHyp => hull_hyp(input)?,
        Command::HullAds => hull_ads(input)?,
        Command::Gluing => gluing(input)?,
        Command::Width => width_cmd(input)?,
        Command::Earthquake => earthquake(input)?,
        Command::Qsnorm => qsnorm(input, seed.unwrap_or_default())?,
        Command::ApproxLam => approx_lam(input, opts.tol.unwrap_or(1e-9))?,
        Command::MessCheck => mess(input, seed.unwrap_or_default(), opts.tol.unwrap_or(1e-8))?,
        Command::SolveInverse => solve(input, seed.unwrap_or_default(), opts.tol.unwrap_or(1e-9))?,
        Command::DegenerationStudy => degeneration(input, seed.unwrap_or_default())?,
    };
    let report = json!({
        "command": cmd.name(),
        "version": VERSION,
        "config_hash": config_hash(cmd.name(), input, seed, opts.tol),
        "seed": seed,
        "result": result,
    });
    Ok(Output { report, csv })
}

fn hull_hyp(input: &Value) -> Result<(Value, String)> {
    let cfg: IdealPointsJson = parse(input)?;
    let hull = convex_hull_ideal(&cfg.points(), cfg.marked())?;
    let g = hyp_gluing_samples(&hull)?;
    let mut hull_json = serde_json::to_value(HullH3Json::from_hull(&hull)).expect("serializable");
    hull_json["gluing"] = serde_json::to_value(CircleMapJson::from_map(&g)).expect("serializable");
    Ok((hull_json, gluing_csv(&g)?))
}

fn hull_ads(input: &Value) -> Result<(Value, String)> {
    let cfg: PolygonJson = parse(input)?;
    let hull = convex_hull_acausal(&cfg.to_polygon()?)?;
    let routes = gluing_routes(&hull)?;
    let mut hull_json = serde_json::to_value(HullAdsJson::from_hull(&hull)).expect("serializable");
    hull_json["gluing"] = serde_json::to_value(CircleMapJson::from_map(&routes.development)).expect("serializable");
    hull_json["route_discrepancy"] = json!(routes.discrepancy);
    Ok((hull_json, gluing_csv(&routes.development)?))
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum GluingInput {
    Ads { polygon: PolygonJson },
    Hyp { vertices: IdealPointsJson },
}

fn gluing(input: &Value) -> Result<(Value, String)> {
    let (g, discrepancy) = match parse::<GluingInput>(input)? {
        GluingInput::Ads { polygon } => {
            let r = gluing_routes(&convex_hull_acausal(&polygon.to_polygon()?)?)?;
            if r.discrepancy > 1e-7 {
                return Err(Error::RouteMismatch(r.discrepancy));
            }
            (r.development, Some(r.discrepancy))
        }
        GluingInput::Hyp { vertices } => {
            (hyp_gluing_samples(&convex_hull_ideal(&vertices.points(), vertices.marked())?)?, None)
        }
    };
    let result = json!({ "samples": CircleMapJson::from_map(&g), "route_discrepancy": discrepancy });
    Ok((result, gluing_csv(&g)?))
}

fn width_cmd(input: &Value) -> Result<(Value, String)> {
    let cfg: PolygonJson = parse(input)?;
    let w = width(&convex_hull_acausal(&cfg.to_polygon()?)?)?;
    let csv = write_csv(
        &["lower", "upper", "future_face", "past_face"],
        &[vec![f(w.lower), f(w.upper), w.argmax_faces[0].to_string(), w.argmax_faces[1].to_string()]],
    )?;
    Ok((serde_json::to_value(WidthJson::from(&w)).expect("serializable"), csv))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EarthquakeInput {
    lamination: LaminationJson,
    side: String,
    points: Vec<RealJson>,
    #[serde(default)]
    base: Option<[f64; 2]>,
}

fn earthquake(input: &Value) -> Result<(Value, String)> {
    let cfg: EarthquakeInput = parse(input)?;
    let lam = cfg.lamination.to_lamination()?;
    let hand = parse_handedness(&cfg.side)?;
    let e = match cfg.base {
        Some([re, im]) => EarthquakeSpec::new(lam, hand, Complex64::new(re, im))?,
        None => EarthquakeSpec::with_default_base(lam, hand)?,
    };
    let pts: Vec<CirclePoint> = cfg.points.iter().map(|p| p.0).collect();
    let ys: Vec<CirclePoint> = pts.iter().map(|x| e.eval_boundary(x)).collect();
    let rows: Vec<Vec<String>> =
        pts.iter().zip(&ys).enumerate().map(|(i, (x, y))| vec![i.to_string(), real_cell(x), real_cell(y)]).collect();
    let b = e.base();
    let result = json!({
        "side": hand.name(),
        "base": [b.re, b.im],
        "samples": pts.iter().zip(&ys).map(|(x, y)| (RealJson(*x), RealJson(*y))).collect::<Vec<_>>(),
        "image_lamination": LaminationJson::from_lamination(&e.image_lamination()),
    });
    Ok((result, write_csv(&["index", "x", "y"], &rows)?))
}

fn default_count() -> usize {
    10_000
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QsInput {
    map: CircleMapJson,
    #[serde(default = "default_count")]
    count: usize,
    #[serde(default)]
    spread: Option<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    seed: Option<u64>,
}

fn qsnorm(input: &Value, seed: u64) -> Result<(Value, String)> {
    let cfg: QsInput = parse(input)?;
    let h = cfg.map.to_map()?;
    let mut sampler = match cfg.spread {
        Some(s) => QuadrupleSampler::with_spread(seed, s),
        None => QuadrupleSampler::new(seed),
    };
    let est = qs_norm_estimate(&h, &mut sampler, cfg.count);
    let result = json!({ "estimate": est, "count": cfg.count });
    Ok((result, write_csv(&["count", "qs_norm_estimate"], &[vec![cfg.count.to_string(), f(est)]])?))
}

fn default_x0() -> [f64; 2] {
    [0.0, 1.0]
}

fn default_orbit_budget() -> usize {
    200_000
}

fn default_margin() -> f64 {
    0.5
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApproxInput {
    lamination: LaminationJson,
    #[serde(default = "default_x0")]
    x0: [f64; 2],
    k: f64,
    n: u32,
    #[serde(default = "default_orbit_budget")]
    orbit_budget: usize,
    /// The orbit is enumerated on B(x0, k + n + margin).
    #[serde(default = "default_margin")]
    margin: f64,
}

fn approx_lam(input: &Value, tol: f64) -> Result<(Value, String)> {
    let cfg: ApproxInput = parse(input)?;
    if cfg.n == 0 || !(cfg.k >= 0.0) {
        return Err(Error::Schema("k must be >= 0 and n >= 1".into()));
    }
    let lam = cfg.lamination.to_lamination()?;
    let before = lam.geodesics();
    let after = perturb_ultraparallel(&before, cfg.n)?;
    let moved = FiniteLamination::new(
        after.iter().zip(lam.leaves()).map(|(g, l)| Leaf { geodesic: *g, weight: l.weight }).collect(),
    )?;
    let radius = cfg.k + cfg.n as f64;
    let poly = build_right_angled_polygon(&moved, Complex64::new(cfg.x0[0], cfg.x0[1]), radius)?;
    let claims = check_polygon_claims(&moved, &poly);
    let orbit = reflection_orbit_lamination(&moved, &poly, radius + cfg.margin, cfg.orbit_budget)?;
    let restriction = restrictions_agree(&moved, &orbit.lamination, &poly.center, radius, tol);
    let (na, nb) = (thurston_norm_estimate(&moved), thurston_norm_estimate(&orbit.lamination));
    let displacement: Vec<f64> = before.iter().zip(&after).map(|(a, b)| geodesic_space_distance(a, b)).collect();
    let mut pairs = Vec::new();
    for i in 0..before.len() {
        for j in 0..i {
            pairs.push(json!({ "pair": [j, i], "before": before[i].distance(&before[j]), "after": after[i].distance(&after[j]) }));
        }
    }
    let rows: Vec<Vec<String>> = (0..before.len())
        .map(|i| {
            vec![
                i.to_string(),
                real_cell(&before[i].p),
                real_cell(&before[i].q),
                real_cell(&after[i].p),
                real_cell(&after[i].q),
                f(displacement[i]),
            ]
        })
        .collect();
    let result = json!({
        "radius": radius,
        "perturbed": LaminationJson::from_lamination(&moved),
        "displacement": displacement,
        "pair_distances": pairs,
        "polygon": {
            "vertices": poly.uhp.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "arc_nodes": poly.arc_nodes,
            "claims": {
                "contains_ball": claims.contains_ball,
                "right_angles": claims.right_angles,
                "orthogonal_crossings": claims.orthogonal_crossings,
                "vertex_separation": claims.vertex_separation,
                "max_angle_error": claims.max_angle_error,
                "min_vertex_gap": claims.min_vertex_gap,
                "inner_radius": claims.inner_radius,
            },
        },
        "orbit": {
            "radius": orbit.radius,
            "elements": orbit.elements,
            "leaves": orbit.lamination.len(),
            "generators": orbit.generators.iter().map(|m| [[m[(0, 0)], m[(0, 1)], m[(0, 2)]], [m[(1, 0)], m[(1, 1)], m[(1, 2)]], [m[(2, 0)], m[(2, 1)], m[(2, 2)]]]).collect::<Vec<_>>(),
        },
        "restriction_equal": restriction,
        "norm_input": { "lower": na.lower, "upper": na.upper },
        "norm_orbit": { "lower": nb.lower, "upper": nb.upper },
    });
    Ok((result, write_csv(&["leaf", "p_before", "q_before", "p_after", "q_after", "displacement"], &rows)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomPolygons {
    count: usize,
    #[serde(default = "four")]
    min_vertices: usize,
    #[serde(default = "eight")]
    max_vertices: usize,
    #[serde(default = "default_gap")]
    gap: f64,
}

fn four() -> usize {
    4
}

fn eight() -> usize {
    8
}

fn default_gap() -> f64 {
    0.05
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MessInput {
    #[serde(default)]
    polygons: Vec<PolygonJson>,
    #[serde(default)]
    random: Option<RandomPolygons>,
    #[serde(default)]
    #[allow(dead_code)]
    seed: Option<u64>,
}

/// Seed of the i-th random polygon of a batch.
pub fn batch_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i as u64)
}

fn mess(input: &Value, seed: u64, tol: f64) -> Result<(Value, String)> {
    let cfg: MessInput = parse(input)?;
    let mut polys: Vec<AcausalPolygon> = cfg.polygons.iter().map(|p| p.to_polygon()).collect::<Result<_>>()?;
    if let Some(r) = &cfg.random {
        if r.min_vertices < 4 || r.max_vertices < r.min_vertices {
            return Err(Error::Schema("need 4 <= min_vertices <= max_vertices".into()));
        }
        let span = r.max_vertices - r.min_vertices + 1;
        let extra: Vec<AcausalPolygon> = (0..r.count)
            .into_par_iter()
            .map(|i| seeded_polygon(batch_seed(seed, i), r.min_vertices + i % span, r.gap))
            .collect::<Result<_>>()?;
        polys.extend(extra);
    }
    let rows: Vec<(usize, f64, f64, f64, f64)> = polys
        .par_iter()
        .map(|p| {
            let hull = convex_hull_acausal(p)?;
            let m = mess_check(&hull)?;
            let d = gluing_routes(&hull)?.discrepancy;
            Ok((p.points.len(), m.future_deviation, m.past_deviation, m.max_deviation, d))
        })
        .collect::<Result<_>>()?;
    let max_dev = rows.iter().fold(0.0f64, |m, r| m.max(r.3));
    let max_route = rows.iter().fold(0.0f64, |m, r| m.max(r.4));
    let result = json!({
        "count": rows.len(),
        "max_deviation": max_dev,
        "max_route_discrepancy": max_route,
        "tol": tol,
        "pass": max_dev < tol,
        "polygons": rows.iter().map(|r| json!({
            "vertices": r.0, "future_deviation": r.1, "past_deviation": r.2, "max_deviation": r.3, "route_discrepancy": r.4,
        })).collect::<Vec<_>>(),
    });
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vec![i.to_string(), r.0.to_string(), f(r.1), f(r.2), f(r.3), f(r.4)])
        .collect();
    let header = ["index", "vertices", "future_deviation", "past_deviation", "max_deviation", "route_discrepancy"];
    Ok((result, write_csv(&header, &csv_rows)?))
}

fn parse_oracle(s: &str) -> Result<OracleKind> {
    match s {
        "ads" => Ok(OracleKind::Ads),
        "hyp" => Ok(OracleKind::Hyp),
        _ => Err(Error::Schema(format!("oracle must be \"ads\" or \"hyp\", got {s:?}"))),
    }
}

fn solve(input: &Value, seed: u64, tol: f64) -> Result<(Value, String)> {
    let cfg: SolveConfigJson = parse(input)?;
    let oracle = ForwardOracle::new(parse_oracle(&cfg.oracle)?, cfg.grid(), cfg.marked())?;
    let target = cfg.target.to_map()?;
    let mut opts = SolveOptions { budget: cfg.budget, seed, tol, ..Default::default() };
    if let Some(r) = cfg.restarts {
        opts.restarts = r;
    }
    let rep = solve_gluing_inverse(&oracle, &target, &opts)?;
    let result = json!({
        "oracle": oracle.kind.name(),
        "params": rep.params.iter().map(|p| RealJson(*p)).collect::<Vec<_>>(),
        "residual": rep.residual,
        "evaluations": rep.evaluations,
        "iterations": rep.iterations,
        "restart": rep.restart,
        "exhausted": rep.exhausted,
        "trace": rep.trace,
    });
    let rows: Vec<Vec<String>> = rep.trace.iter().enumerate().map(|(i, r)| vec![i.to_string(), f(*r)]).collect();
    Ok((result, write_csv(&["step", "residual"], &rows)?))
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Schedule {
    Linear,
    Geometric,
}

fn linear() -> Schedule {
    Schedule::Linear
}

fn default_ratio() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

fn default_qs_count() -> usize {
    20_000
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyInput {
    start: PolygonJson,
    end: PolygonJson,
    steps: usize,
    #[serde(default = "linear")]
    schedule: Schedule,
    #[serde(default = "default_ratio")]
    ratio: f64,
    #[serde(default = "default_qs_count")]
    qs_count: usize,
    #[serde(default)]
    #[allow(dead_code)]
    seed: Option<u64>,
}

/// One row of a degeneration study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerationRow {
    pub parameter: f64,
    pub width: f64,
    pub qs_norm_estimate: f64,
}

/// Outcome of a degeneration study. Rows stop at the first member that
/// is not acausal; `truncated` records that.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationStudy {
    pub rows: Vec<DegenerationRow>,
    pub truncated: bool,
}

/// Family from `start` to `end` by moving every angle coordinate along
/// the shorter arc. Parameters are k/(steps-1) for the linear schedule
/// (both ends included) and 1 - ratio^k for the geometric one. Width of
/// the hull and the qs estimate of x_i -> y_i (same seed for every row)
/// are computed per member.
pub fn degeneration_study(
    start: &AcausalPolygon,
    end: &[EinPoint],
    steps: usize,
    geometric: Option<f64>,
    seed: u64,
    qs_count: usize,
) -> Result<DegenerationStudy> {
    let n = start.points.len();
    if end.len() != n || steps == 0 {
        return Err(Error::InvalidSamples("family endpoints differ in size or no steps".into()));
    }
    let wrap = |t: f64| (t + PI).rem_euclid(TAU) - PI;
    let coords = |e: &EinPoint| [e.p.angle(), e.q.angle()];
    let t_of = |k: usize| match geometric {
        Some(r) => 1.0 - r.powi(k as i32),
        None if steps == 1 => 0.0,
        None => k as f64 / (steps - 1) as f64,
    };
    let members: Vec<Result<DegenerationRow>> = (0..steps)
        .into_par_iter()
        .map(|k| {
            let t = t_of(k);
            let pts: Vec<EinPoint> = start
                .points
                .iter()
                .zip(end)
                .map(|(a, b)| {
                    let (ca, cb) = (coords(a), coords(b));
                    let at = |i: usize| CirclePoint::from_angle(ca[i] + t * wrap(cb[i] - ca[i]));
                    EinPoint::new(at(0), at(1))
                })
                .collect();
            let poly = AcausalPolygon::new(pts, start.marked)?;
            let w = width(&convex_hull_acausal(&poly)?)?;
            let f = CircleMap::from_samples(poly.xs(), poly.ys(), Interp::PwMoebius)?;
            let qs = qs_norm_estimate(&f, &mut QuadrupleSampler::new(seed), qs_count);
            Ok(DegenerationRow { parameter: t, width: w.lower, qs_norm_estimate: qs })
        })
        .collect();
    let mut rows = Vec::with_capacity(steps);
    for m in members {
        match m {
            Ok(r) => rows.push(r),
            Err(Error::NotAcausal(_)) => return Ok(DegenerationStudy { rows, truncated: true }),
            Err(e) => return Err(e),
        }
    }
    Ok(DegenerationStudy { rows, truncated: false })
}

fn degeneration(input: &Value, seed: u64) -> Result<(Value, String)> {
    let cfg: FamilyInput = parse(input)?;
    let start = cfg.start.to_polygon()?;
    let end: Vec<EinPoint> = cfg.end.points.iter().map(|(x, y)| EinPoint::new(x.0, y.0)).collect();
    let geometric = match cfg.schedule {
        Schedule::Geometric if !(cfg.ratio > 0.0 && cfg.ratio < 1.0) => {
            return Err(Error::Schema("ratio must lie in (0, 1)".into()))
        }
        Schedule::Geometric => Some(cfg.ratio),
        Schedule::Linear => None,
    };
    let study = degeneration_study(&start, &end, cfg.steps, geometric, seed, cfg.qs_count)?;
    let rows: Vec<Vec<String>> =
        study.rows.iter().map(|r| vec![f(r.parameter), f(r.width), f(r.qs_norm_estimate)]).collect();
    let result = json!({
        "truncated": study.truncated,
        "rows": study.rows.iter().map(|r| json!({
            "parameter": r.parameter, "width": r.width, "qs_norm_estimate": r.qs_norm_estimate,
        })).collect::<Vec<_>>(),
    });
    Ok((result, write_csv(&["parameter", "width", "qs_norm_estimate"], &rows)?))
}

fn error_json(e: &Error) -> String {
    serde_json::to_string_pretty(&json!({ "error": e.code(), "message": e.to_string(), "version": VERSION }))
        .expect("serializable")
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema(_) => 3,
        _ => 2,
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", cli.config.display())))?;
    let input: Value = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
    let opts = RunOptions { seed: cli.seed, tol: cli.tol };
    let out = match cli.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| run(cli.command, &input, &opts))?,
        None => run(cli.command, &input, &opts)?,
    };
    let json_text = serde_json::to_string_pretty(&out.report).expect("serializable") + "\n";
    if let Some(dir) = &cli.out {
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join(format!("{}.json", cli.command.name())), &json_text).map_err(io)?;
        std::fs::write(dir.join(format!("{}.csv", cli.command.name())), &out.csv).map_err(io)?;
    }
    Ok(match cli.format {
        Format::Json => json_text,
        Format::Csv => out.csv,
    })
}

/// Parses the process arguments, runs, prints, and returns the exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            println!("{}", error_json(&Error::Schema(e.to_string().trim().to_string())));
            return 3;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            println!("{}", error_json(&e));
            exit_code(&e)
        }
    }
}
