// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line surface: argument definitions and command execution.

use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use spiralwind_core::certificate::{refute_unwinding, winding_certificate, CertificateVariant, Refutation};
use spiralwind_core::directions::{
    direction_grid, estimate_direction_set, is_unwinded, ssp_defect, tilde_ssp_check, DirectionSet,
    ScaleSchedule,
};
use spiralwind_core::maps::{
    aa_limit, apply_inverse, apply_map, distortion_estimate, partition_length, probe_grid,
    rescaled_family, transported_direction_check, AaOutcome, PlanarMap, Region,
};
use spiralwind_core::profiles::{ArcLength, DecayProfile, SpiralPolyline};
use spiralwind_core::radii::{
    build_exceptional_union, extract_regular_subsequence, gap_ratio_sup, regular_subsequence_from,
    subexp_classify, verify_claim_bounds, winding_radii, ClaimCheck, DecayVerdict, F1Spec, RadiiSequence,
};
use spiralwind_core::Point;

use crate::error::{CliError, CliResult};
use crate::io::{emit_json, read_points, real, write_csv, write_text};
use crate::spec::{IndexList, MapSpec, ProfileSpec, RealList, Vec2, MAP_GRAMMAR, PROFILE_GRAMMAR};
use crate::svg;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn grammar_help() -> String {
    format!("Profile specs: {PROFILE_GRAMMAR}\nMap specs:     {MAP_GRAMMAR}")
}

#[derive(Debug, Parser)]
#[command(name = "spiralwind", version, about = "Winding radii, direction sets, bi-Lipschitz maps and winding certificates for planar spirals")]
#[command(after_help = grammar_help())]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a spiral and report its length
    #[command(after_help = grammar_help())]
    Profiles(ProfilesArgs),
    /// Winding radii r_n, reciprocals and ratios
    #[command(after_help = grammar_help())]
    Radii(RadiiArgs),
    /// Exceptional sets, counting bounds and the regular subsequence
    #[command(after_help = grammar_help())]
    Subseq(SubseqArgs),
    /// Per-winding lower bounds on an unwinding map's constant
    #[command(after_help = grammar_help())]
    Certify(CertifyArgs),
    /// First winding that rules out a claimed constant
    #[command(after_help = grammar_help())]
    Refute(RefuteArgs),
    /// Asymptotic direction set of a point cloud
    #[command(after_help = grammar_help())]
    Directions(DirectionsArgs),
    /// SSP defects on a direction/scale grid, optionally the per-annulus check
    #[command(after_help = grammar_help())]
    Ssp(SspArgs),
    /// Apply a map (or its inverse) to a point cloud
    #[command(after_help = grammar_help())]
    MapApply(MapApplyArgs),
    /// Sampled lower bound on a map's bi-Lipschitz constant
    #[command(after_help = grammar_help())]
    MapDistortion(MapDistortionArgs),
    /// Grid limit of the rescaled family h(r x)/r
    #[command(after_help = grammar_help())]
    RescaleLimit(RescaleLimitArgs),
    /// Transport a direction through a map and compare with the image's direction set
    #[command(after_help = grammar_help())]
    TransportCheck(TransportCheckArgs),
    /// Image length of an x-axis segment under a map
    #[command(after_help = grammar_help())]
    Length(LengthArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Profiles(_) => "profiles",
            Command::Radii(_) => "radii",
            Command::Subseq(_) => "subseq",
            Command::Certify(_) => "certify",
            Command::Refute(_) => "refute",
            Command::Directions(_) => "directions",
            Command::Ssp(_) => "ssp",
            Command::MapApply(_) => "map-apply",
            Command::MapDistortion(_) => "map-distortion",
            Command::RescaleLimit(_) => "rescale-limit",
            Command::TransportCheck(_) => "transport-check",
            Command::Length(_) => "length",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Paper,
    Arc,
}

impl From<VariantArg> for CertificateVariant {
    fn from(v: VariantArg) -> CertificateVariant {
        match v {
            VariantArg::Paper => CertificateVariant::PaperConstant,
            VariantArg::Arc => CertificateVariant::ArcLength,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ProfilesArgs {
    #[arg(long, value_name = "SPEC")]
    pub profile: ProfileSpec,
    #[arg(long, default_value_t = 2)]
    pub windings: usize,
    #[arg(long, default_value_t = 360)]
    pub per_winding: usize,
    /// Absolute quadrature tolerance for arc lengths
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
    /// Polyline CSV `t,x,y`
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Highlight winding k and its radial gap in the SVG
    #[arg(long)]
    pub gamma_k: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct RadiiArgs {
    #[arg(long, value_name = "SPEC")]
    pub profile: ProfileSpec,
    #[arg(long)]
    pub n: usize,
    /// Radii CSV `n,r,a,b`
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Trailing window for the decay-rate trace (default max(10, N/10))
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = spiralwind_core::radii::DEFAULT_RATE_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SubseqArgs {
    #[arg(long, value_name = "SPEC")]
    pub profile: ProfileSpec,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Explicit f_1 table `f1(1),f1(2),...` instead of the automatic schedule
    #[arg(long)]
    pub f1: Option<IndexList>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Retained indices CSV `n,ratio`
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit 1 unless the retained ratios approach 1
    #[arg(long)]
    pub assert_regular: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long, value_name = "SPEC")]
    pub profile: ProfileSpec,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Paper)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
    /// Certificate CSV `n,r_n,r_next,L_min,running_max`
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Budget line drawn in the SVG
    #[arg(long)]
    pub claimed_l: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RefuteArgs {
    #[arg(long, value_name = "SPEC")]
    pub profile: ProfileSpec,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub claimed_l: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::Paper)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Exit 1 unless the claimed constant is refuted
    #[arg(long)]
    pub assert_refuted: bool,
}

/// A point cloud read from CSV or sampled from a profile.
#[derive(Debug, Args, Serialize)]
pub struct CloudArgs {
    /// Point CSV `x,y`
    #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
    pub points: Option<PathBuf>,
    #[arg(long, value_name = "SPEC")]
    pub profile: Option<ProfileSpec>,
    #[arg(long, default_value_t = 40)]
    pub windings: usize,
    #[arg(long, default_value_t = 720)]
    pub per_winding: usize,
    /// Marked origin `x,y`
    #[arg(long, default_value = "0,0")]
    pub origin: Vec2,
}

struct Cloud {
    points: Vec<Point>,
    origin: Point,
    profile: Option<DecayProfile>,
}

impl CloudArgs {
    fn load(&self) -> CliResult<Cloud> {
        let origin = Point::new(self.origin.0, self.origin.1);
        match (&self.points, &self.profile) {
            (Some(path), _) => Ok(Cloud { points: read_points(path)?, origin, profile: None }),
            (None, Some(spec)) => {
                let prof = spec.load()?;
                let poly = prof.sample_spiral(self.windings, self.per_winding)?;
                let points = poly.points.iter().map(|&p| p + origin).collect();
                Ok(Cloud { points, origin, profile: Some(prof) })
            }
            (None, None) => Err(CliError::Usage("either --points or --profile is required".into())),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct DirectionsArgs {
    #[command(flatten)]
    pub cloud: CloudArgs,
    #[arg(long, default_value_t = 1.0)]
    pub bin_width_deg: f64,
    /// First scale layer that counts (default: half the layers)
    #[arg(long)]
    pub start_layer: Option<usize>,
    /// Smallest scale (default: smallest distance to the origin in the cloud)
    #[arg(long)]
    pub min_scale: Option<f64>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Exit 1 unless some direction is missed
    #[arg(long)]
    pub assert_unwinded: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SspArgs {
    #[command(flatten)]
    pub cloud: CloudArgs,
    /// Number of equally spaced grid directions
    #[arg(long, default_value_t = 360)]
    pub directions: usize,
    /// Scales t (default: 10 geometric scales inside the cloud's radius range)
    #[arg(long)]
    pub scales: Option<RealList>,
    /// Per-annulus angular check against the profile's winding radii
    #[arg(long)]
    pub tilde: bool,
    /// Allowed per-annulus angular defect
    #[arg(long, default_value_t = 0.5)]
    pub tol_deg: f64,
    /// Defect table CSV `direction_deg,t,delta,reliable`
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Exit 1 unless the per-annulus check passes on a regular radii sequence
    #[arg(long)]
    pub assert_tilde: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MapApplyArgs {
    #[arg(long, value_name = "SPEC")]
    pub map: MapSpec,
    /// Point CSV `x,y`
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub inverse: bool,
    /// Output CSV `x,y,hx,hy`
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct MapDistortionArgs {
    #[arg(long, value_name = "SPEC")]
    pub map: MapSpec,
    /// Inner radius of the sampling annulus; 0 samples the full disk
    #[arg(long, default_value_t = 0.01)]
    pub inner: f64,
    #[arg(long, default_value_t = 1.0)]
    pub outer: f64,
    #[arg(long, default_value_t = 100_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RescaleLimitArgs {
    #[arg(long, value_name = "SPEC")]
    pub map: MapSpec,
    /// Scales r_k = exp(-step·k), k = 1..members
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[arg(long, default_value_t = 40)]
    pub members: usize,
    /// Take scales from the regular subsequence of this profile's winding radii instead
    #[arg(long, value_name = "SPEC")]
    pub profile: Option<ProfileSpec>,
    /// Number of winding radii when --profile is given
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
    #[arg(long, default_value_t = 5)]
    pub rings: usize,
    #[arg(long, default_value_t = 24)]
    pub per_ring: usize,
    /// Limit table CSV `x,y,hx,hy`
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexChoice {
    /// Retained indices if the extraction is regular, otherwise all
    Auto,
    Retained,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct TransportCheckArgs {
    #[arg(long, value_name = "SPEC")]
    pub map: MapSpec,
    #[arg(long, value_name = "SPEC")]
    pub profile: ProfileSpec,
    #[arg(long, default_value_t = 60)]
    pub windings: usize,
    #[arg(long, default_value_t = 720)]
    pub per_winding: usize,
    /// Direction u as `x,y`
    #[arg(long, default_value = "1,0")]
    pub u: Vec2,
    /// How far from u the chosen annulus point may be
    #[arg(long, default_value_t = 1.0)]
    pub angle_tol_deg: f64,
    #[arg(long, default_value_t = 1.0)]
    pub bin_width_deg: f64,
    /// Cloud `x,y` whose direction set is the target (default: the image of the spiral)
    #[arg(long)]
    pub target_points: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = IndexChoice::Auto)]
    pub indices: IndexChoice,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Exit 1 unless the trace tail stays within one target bin
    #[arg(long)]
    pub assert_pass: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LengthArgs {
    #[arg(long, value_name = "SPEC")]
    pub map: MapSpec,
    /// Partition points `t_0,...,t_k` on the x-axis
    #[arg(long)]
    pub partition: RealList,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need(cond: bool, msg: &str) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg))
    }
}

fn report(command: &str, options: &impl Serialize, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("options".into(), serde_json::to_value(options).expect("options serialize"));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn arc_json(a: ArcLength) -> Value {
    match a {
        ArcLength::Finite { value, error } => json!({"kind": "finite", "value": value, "error": error}),
        ArcLength::LowerBound { value } => json!({"kind": "lower_bound", "value": value}),
        ArcLength::Infinite => json!({"kind": "infinite", "value": null}),
    }
}

fn verdict_name(v: DecayVerdict) -> &'static str {
    match v {
        DecayVerdict::SubExponential => "SubExponential",
        DecayVerdict::NotSubExponential => "NotSubExponential",
        DecayVerdict::Inconclusive => "Inconclusive",
    }
}

fn check_n(n: usize) -> CliResult<()> {
    need(n >= 2, "--n must be at least 2")
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("spiralwind {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

pub fn run(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Profiles(a) => profiles(a),
        Command::Radii(a) => radii(a),
        Command::Subseq(a) => subseq(a),
        Command::Certify(a) => certify(a),
        Command::Refute(a) => refute(a),
        Command::Directions(a) => directions(a),
        Command::Ssp(a) => ssp(a),
        Command::MapApply(a) => map_apply(a),
        Command::MapDistortion(a) => map_distortion(a),
        Command::RescaleLimit(a) => rescale_limit(a),
        Command::TransportCheck(a) => transport_check(a),
        Command::Length(a) => length(a),
    }
}

fn gamma_overlay(prof: &DecayProfile, poly: &SpiralPolyline, k: usize) -> CliResult<svg::GammaOverlay> {
    let (t0, t1) = (TAU * (k - 1) as f64, TAU * k as f64);
    let winding = poly
        .t
        .iter()
        .zip(&poly.points)
        .filter(|(t, _)| **t >= t0 - 1e-12 && **t <= t1 + 1e-12)
        .map(|(_, p)| *p)
        .collect();
    let gap = (Point::new(prof.eval(t1)?, 0.0), Point::new(prof.eval(t0)?, 0.0));
    Ok(svg::GammaOverlay { k, winding, gap })
}

fn profiles(a: &ProfilesArgs) -> CliResult<()> {
    let prof = a.profile.load()?;
    let poly = prof.sample_spiral(a.windings, a.per_winding)?;
    let t_end = *poly.t.last().expect("sampled spiral is non-empty");
    if let Some(path) = &a.out {
        let rows = poly.t.iter().zip(&poly.points).map(|(t, p)| vec![real(*t), real(p.x), real(p.y)]);
        write_csv(path, &["t", "x", "y"], rows)?;
    }
    if let Some(path) = &a.svg {
        let overlay = match a.gamma_k {
            Some(k) => {
                need(k >= 1 && k <= a.windings, "--gamma-k must lie in 1..=windings")?;
                Some(gamma_overlay(&prof, &poly, k)?)
            }
            None => None,
        };
        write_text(path, &svg::spiral(&poly, overlay.as_ref())?)?;
    }
    let body = json!({
        "profile": prof.to_string(),
        "points": poly.len(),
        "t_end": t_end,
        "last_radius": prof.eval(t_end)?,
        "polyline_length": poly.length(),
        "arc_length": arc_json(prof.arc_length(0.0, t_end, a.quad_tol)?),
        "total_length": arc_json(prof.arc_length(0.0, f64::INFINITY, a.quad_tol)?),
    });
    emit_json(a.json.as_deref(), &report("profiles", a, body))
}

fn radii(a: &RadiiArgs) -> CliResult<()> {
    check_n(a.n)?;
    let prof = a.profile.load()?;
    let r = winding_radii(&prof, a.n)?;
    if let Some(path) = &a.out {
        let rows = (1..=a.n).map(|n| {
            let b = if n < a.n { real(r.ratio(n)) } else { String::new() };
            vec![n.to_string(), real(r.radius(n)), real(r.reciprocal(n)), b]
        });
        write_csv(path, &["n", "r", "a", "b"], rows)?;
    }
    let window = a.window.unwrap_or((a.n / 10).max(10));
    let classification = if window <= a.n {
        let c = subexp_classify(&r, window, a.threshold)?;
        json!({
            "verdict": verdict_name(c.verdict),
            "trace_verdict": verdict_name(c.trace_verdict),
            "final_rate": c.final_rate,
            "limit_estimate": c.limit_estimate,
            "closed_form_limit": c.closed_form_limit,
            "threshold": c.threshold,
            "window": window,
        })
    } else {
        Value::Null
    };
    let gap = if a.n >= 3 {
        let g = gap_ratio_sup(&r)?;
        json!({"sup": g.sup, "m": g.m, "n": g.n, "gaps_monotone": g.gaps_monotone})
    } else {
        Value::Null
    };
    let body = json!({
        "profile": prof.to_string(),
        "n": a.n,
        "r_last": r.radius(a.n),
        "ln_r_last": r.ln_radius(a.n),
        "classification": classification,
        "gap_ratio": gap,
    });
    emit_json(a.json.as_deref(), &report("radii", a, body))
}

fn claim_json(c: &ClaimCheck) -> Value {
    json!({
        "m": c.m,
        "n0": c.n0,
        "holds_eventually": c.holds_eventually(),
        "violations_after_n0": c.violations_after_n0,
        "rows": c.rows.iter().map(|r| json!({
            "checkpoint": r.checkpoint, "count": r.count, "bound": r.bound, "holds": r.holds,
        })).collect::<Vec<_>>(),
    })
}

fn subseq(a: &SubseqArgs) -> CliResult<()> {
    check_n(a.n)?;
    let prof = a.profile.load()?;
    let r = winding_radii(&prof, a.n)?;
    let f1 = match &a.f1 {
        Some(list) => F1Spec::Explicit(list.0.clone()),
        None => F1Spec::Auto,
    };
    let ex = build_exceptional_union(&r, &f1, a.m_max)?;
    let claims = if a.n >= 100 { Some(verify_claim_bounds(&ex)?) } else { None };
    let sub = regular_subsequence_from(&r, ex);
    let ex = &sub.extraction;
    if let Some(path) = &a.out {
        let rows = sub.indices.iter().zip(&sub.ratio_trace).map(|(n, q)| vec![n.to_string(), real(*q)]);
        write_csv(path, &["n", "ratio"], rows)?;
    }
    let body = json!({
        "verdict": if sub.success { "Regular" } else { "ExtractionFailed" },
        "profile": prof.to_string(),
        "n": ex.n,
        "m_max": ex.m_max,
        "decay_verdict": verdict_name(ex.decay_verdict),
        "f1": ex.f1,
        "f1_warning": ex.f1_warning,
        "f2_final": ex.f2_final,
        "ln_g_final": ex.ln_g_final,
        "diagnostic_ratio": ex.diagnostic_ratio,
        "union_count": ex.union.len(),
        "retained_count": sub.indices.len(),
        "density_trace": ex.density_trace.iter().map(|d| json!({
            "checkpoint": d.checkpoint, "count": d.count, "density": d.density,
        })).collect::<Vec<_>>(),
        "ratio_diag": sub.diagnostic,
        "ratio_threshold": sub.threshold,
        "successor_ratio_min": sub.successor_ratio_min,
        "successor_ratio_max": sub.successor_ratio_max,
        "claim1": claims.as_ref().map(|c| c.per_level.iter().map(claim_json).collect::<Vec<_>>()),
        "claim2": claims.as_ref().map(|c| claim_json(&c.union)),
        "n0_table": claims.as_ref().map(|c| c.per_level.iter().map(|l| json!({"m": l.m, "n0": l.n0})).collect::<Vec<_>>()),
    });
    emit_json(a.json.as_deref(), &report("subseq", a, body))?;
    if a.assert_regular && !sub.success {
        return Err(CliError::Assertion("retained ratios do not approach 1".into()));
    }
    Ok(())
}

fn certify(a: &CertifyArgs) -> CliResult<()> {
    check_n(a.n)?;
    let prof = a.profile.load()?;
    let r = winding_radii(&prof, a.n)?;
    let cert = winding_certificate(&r, a.variant.into(), a.quad_tol)?;
    if let Some(path) = &a.out {
        let rows = cert.bounds.iter().map(|b| {
            vec![b.n.to_string(), real(b.r_n), real(b.r_next), real(b.l_min), real(b.running_max)]
        });
        write_csv(path, &["n", "r_n", "r_next", "L_min", "running_max"], rows)?;
    }
    if let Some(path) = &a.svg {
        write_text(path, &svg::certificate(&cert, a.claimed_l)?)?;
    }
    let last = cert.bounds.last().expect("N >= 2 gives one bound");
    let body = json!({
        "profile": cert.profile,
        "variant": cert.variant.name(),
        "quad_tol": cert.quad_tol,
        "n": a.n,
        "l_min_first": cert.bounds[0].l_min,
        "l_min_last": last.l_min,
        "running_max": last.running_max,
        "scope": "lower bounds for maps taking the spiral onto a straight segment",
    });
    emit_json(a.json.as_deref(), &report("certify", a, body))
}

fn refute(a: &RefuteArgs) -> CliResult<()> {
    check_n(a.n)?;
    let prof = a.profile.load()?;
    let r = winding_radii(&prof, a.n)?;
    let cert = winding_certificate(&r, a.variant.into(), a.quad_tol)?;
    let rep = refute_unwinding(&cert, a.claimed_l)?;
    let (verdict, within) = match rep.verdict {
        Refutation::RefutedAtIndex(_) => ("RefutedAtIndex", None),
        Refutation::NotRefutedWithin(n) => ("NotRefutedWithin", Some(n)),
    };
    let chain = rep.chain.map(|c| {
        let n = rep.n_star().expect("chain implies an index");
        json!({
            "gap": c.gap,
            "winding_lower_bound": c.winding_lower_bound,
            "r_next": cert.bounds[n - 1].r_next,
            "L_min": cert.bounds[n - 1].l_min,
            "stretched_gap": c.stretched_gap,
            "compressed_winding": c.compressed_winding,
        })
    });
    let body = json!({
        "variant": cert.variant.name(),
        "L_claimed": a.claimed_l,
        "verdict": verdict,
        "n_star": rep.n_star(),
        "within": within,
        "chain": chain,
        "profile": cert.profile,
    });
    emit_json(a.json.as_deref(), &report("refute", a, body))?;
    if a.assert_refuted && rep.n_star().is_none() {
        return Err(CliError::Assertion(format!("L = {} is not refuted within N = {}", a.claimed_l, a.n)));
    }
    Ok(())
}

fn schedule_for(points: &[Point], origin: Point, min_scale: Option<f64>) -> CliResult<ScaleSchedule> {
    match min_scale {
        Some(lo) => {
            let hi = points.iter().map(|p| p.distance(origin)).fold(0.0, f64::max);
            Ok(ScaleSchedule::dyadic(hi, lo)?)
        }
        None => Ok(ScaleSchedule::dyadic_for(points, origin)?),
    }
}

fn direction_set_json(ds: &DirectionSet) -> CliResult<Value> {
    let layers = ds.layers();
    let unwound = if layers >= 3 { Some(is_unwinded(ds)?) } else { None };
    Ok(json!({
        "bin_width_deg": ds.bin_width.to_degrees(),
        "layers": layers,
        "start_layer": ds.start_layer,
        "empty_layers": ds.empty_layers,
        "persistent_bins": ds.persistent,
        "max_gap_deg": unwound.map(|u| u.max_gap.to_degrees()),
        "verdict": unwound.map(|u| if u.unwinded { "Unwinded" } else { "NotUnwinded" }),
    }))
}

fn directions(a: &DirectionsArgs) -> CliResult<()> {
    let cloud = a.cloud.load()?;
    let sched = schedule_for(&cloud.points, cloud.origin, a.min_scale)?;
    let ds = estimate_direction_set(&cloud.points, cloud.origin, &sched, a.bin_width_deg.to_radians(), a.start_layer)?;
    if let Some(path) = &a.svg {
        write_text(path, &svg::directions(&ds)?)?;
    }
    need(ds.layers() >= 3 || !a.assert_unwinded, "the unwinded test needs at least 3 layers")?;
    let body = direction_set_json(&ds)?;
    emit_json(a.json.as_deref(), &report("directions", a, body))?;
    if a.assert_unwinded && !is_unwinded(&ds)?.unwinded {
        return Err(CliError::Assertion("every direction is persistent".into()));
    }
    Ok(())
}

fn default_scales(points: &[Point], origin: Point) -> Vec<f64> {
    let (lo, hi) = points
        .iter()
        .map(|p| p.distance(origin))
        .filter(|&r| r > 0.0)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let (top, bottom) = (hi / 2.0, (2.0 * lo).min(hi / 4.0));
    (0..10).map(|i| top * (bottom / top).powf(i as f64 / 9.0)).collect()
}

fn ssp(a: &SspArgs) -> CliResult<()> {
    let cloud = a.cloud.load()?;
    need(a.directions >= 1, "--directions must be positive")?;
    need(!cloud.points.is_empty(), "empty point cloud")?;
    let dirs = direction_grid(a.directions);
    let scales = match &a.scales {
        Some(list) => list.0.clone(),
        None => default_scales(&cloud.points, cloud.origin),
    };
    let table: Vec<Vec<(f64, bool)>> = dirs
        .par_iter()
        .map(|&d| {
            scales
                .iter()
                .map(|&t| {
                    ssp_defect(&cloud.points, cloud.origin, Point::from_polar(1.0, d), t)
                        .map(|s| (s.delta, s.reliable))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    if let Some(path) = &a.out {
        let rows = dirs.iter().zip(&table).flat_map(|(d, row)| {
            scales.iter().zip(row).map(move |(t, (delta, rel))| {
                vec![real(d.to_degrees()), real(*t), real(*delta), rel.to_string()]
            })
        });
        write_csv(path, &["direction_deg", "t", "delta", "reliable"], rows)?;
    }
    let max_per_scale: Vec<f64> =
        (0..scales.len()).map(|j| table.iter().map(|row| row[j].0).fold(0.0, f64::max)).collect();
    let unreliable = table.iter().flatten().filter(|c| !c.1).count();
    let tilde = if a.tilde {
        let prof = cloud
            .profile
            .as_ref()
            .ok_or_else(|| usage("--tilde needs --profile (winding radii come from the profile)"))?;
        let radii = winding_radii(prof, a.cloud.windings + 1)?;
        let sub = extract_regular_subsequence(&radii)?;
        let tol = a.tol_deg.to_radians();
        let rep = tilde_ssp_check(&cloud.points, cloud.origin, &radii, &sub, &dirs, |_| tol)?;
        let worst = rep.rows.iter().filter_map(|r| r.max_defect).fold(0.0, f64::max);
        let empty = rep.rows.iter().filter(|r| r.max_defect.is_none()).count();
        Some((rep.tilde_ssp, json!({
            "threshold": rep.threshold,
            "pass": rep.pass,
            "regular": rep.regular,
            "tilde_ssp": rep.tilde_ssp,
            "annuli": rep.rows.len(),
            "empty_annuli": empty,
            "max_defect_deg": worst.to_degrees(),
            "tol_deg": a.tol_deg,
        })))
    } else {
        None
    };
    let body = json!({
        "directions": a.directions,
        "scales": scales,
        "max_per_scale": max_per_scale,
        "max_defect": max_per_scale.iter().copied().fold(0.0, f64::max),
        "unreliable_cells": unreliable,
        "tilde": tilde.as_ref().map(|t| &t.1),
    });
    emit_json(a.json.as_deref(), &report("ssp", a, body))?;
    if a.assert_tilde && !tilde.is_some_and(|t| t.0) {
        return Err(CliError::Assertion("per-annulus check did not pass on a regular sequence".into()));
    }
    Ok(())
}

fn map_apply(a: &MapApplyArgs) -> CliResult<()> {
    let pts = read_points(&a.points)?;
    let map = &a.map.map;
    let images: Vec<Point> = if a.inverse {
        need(map.has_inverse(), "map has no inverse")?;
        pts.par_chunks(4096)
            .map(|c| apply_inverse(map, c))
            .collect::<Result<Vec<_>, _>>()?
            .concat()
    } else {
        pts.par_chunks(4096).map(|c| apply_map(map, c)).collect::<Vec<_>>().concat()
    };
    let rows = pts.iter().zip(&images).map(|(p, q)| vec![real(p.x), real(p.y), real(q.x), real(q.y)]);
    write_csv(&a.out, &["x", "y", "hx", "hy"], rows)
}

fn map_distortion(a: &MapDistortionArgs) -> CliResult<()> {
    let region = if a.inner == 0.0 {
        Region::Disk { radius: a.outer }
    } else {
        Region::Annulus { inner: a.inner, outer: a.outer }
    };
    let d = distortion_estimate(&a.map.map, region, a.pairs, a.seed)?;
    let body = json!({
        "l_est": d.l_est,
        "bound_kind": "lower",
        "max_ratio": d.max_ratio,
        "min_ratio": d.min_ratio,
        "pairs": d.pairs,
        "skipped": d.skipped,
        "declared_lipschitz": a.map.map.declared_lipschitz(),
    });
    emit_json(a.json.as_deref(), &report("map-distortion", a, body))
}

fn rescale_limit(a: &RescaleLimitArgs) -> CliResult<()> {
    let scales: Vec<f64> = match &a.profile {
        Some(spec) => {
            check_n(a.n)?;
            let r = winding_radii(&spec.load()?, a.n)?;
            let sub = extract_regular_subsequence(&r)?;
            let idx: Vec<usize> = if sub.indices.is_empty() { (1..a.n).collect() } else { sub.indices };
            let from = idx.len().saturating_sub(a.members);
            idx[from..].iter().map(|&n| r.radius(n)).filter(|&x| x > 0.0).collect()
        }
        None => {
            need(a.step > 0.0, "--step must be positive")?;
            (1..=a.members).map(|k| (-a.step * k as f64).exp()).filter(|&x| x > 0.0).collect()
        }
    };
    let fam = rescaled_family(&a.map.map, scales)?;
    let grid = probe_grid(a.rings, a.per_ring);
    let outcome = aa_limit(&fam, &grid, a.tol)?;
    let body = match &outcome {
        AaOutcome::Converged(lim) => {
            if let Some(path) = &a.out {
                let rows = lim.grid.iter().zip(&lim.limit).map(|(x, h)| vec![real(x.x), real(x.y), real(h.x), real(h.y)]);
                write_csv(path, &["x", "y", "hx", "hy"], rows)?;
            }
            if let Some(path) = &a.svg {
                write_text(path, &svg::limit_table(lim)?)?;
            }
            json!({
                "outcome": "Converged",
                "members": fam.len(),
                "selected": lim.selected,
                "modulus": lim.modulus,
                "declared_lipschitz": lim.declared_lipschitz,
                "modulus_ok": lim.modulus_ok(),
            })
        }
        AaOutcome::NoConvergentSubsequence { largest_cluster } => json!({
            "outcome": "NoConvergentSubsequence",
            "members": fam.len(),
            "largest_cluster": largest_cluster,
        }),
    };
    emit_json(a.json.as_deref(), &report("rescale-limit", a, body))
}

fn transport_check(a: &TransportCheckArgs) -> CliResult<()> {
    let prof = a.profile.load()?;
    let cloud = prof.sample_spiral(a.windings, a.per_winding)?.points;
    let radii: RadiiSequence = winding_radii(&prof, a.windings + 1)?;
    let map = &a.map.map;
    let bin = a.bin_width_deg.to_radians();
    let target_cloud = match &a.target_points {
        Some(p) => read_points(p)?,
        None => apply_map(map, &cloud),
    };
    let sched = ScaleSchedule::dyadic_for(&target_cloud, Point::ORIGIN)?;
    let target = estimate_direction_set(&target_cloud, Point::ORIGIN, &sched, bin, None)?;
    let sub = extract_regular_subsequence(&radii)?;
    let all: Vec<usize> = (1..radii.len()).collect();
    let indices = match a.indices {
        IndexChoice::All => all,
        IndexChoice::Retained => sub.indices.clone(),
        IndexChoice::Auto if sub.success => sub.indices.clone(),
        IndexChoice::Auto => all,
    };
    let u = Point::new(a.u.0, a.u.1);
    let trace = transported_direction_check(map, &cloud, &radii, &indices, u, a.angle_tol_deg.to_radians(), &target)?;
    let above_10 = trace.entries.iter().filter(|e| e.defect > 10f64.to_radians()).count();
    let body = json!({
        "pass": trace.pass,
        "regular": sub.success,
        "bin_width_deg": a.bin_width_deg,
        "target_persistent_bins": target.persistent.len(),
        "entries": trace.entries.iter().map(|e| json!({
            "k": e.k,
            "n": e.n,
            "defect_deg": e.defect.to_degrees(),
            "image_defect_deg": e.image_defect.to_degrees(),
            "blowup_defect_deg": e.blowup_defect.to_degrees(),
            "proximity": e.proximity,
        })).collect::<Vec<_>>(),
        "entries_above_10_deg": above_10,
        "skipped": trace.skipped,
        "tail_max_defect_deg": trace.tail().iter().map(|e| e.defect).fold(0.0, f64::max).to_degrees(),
    });
    emit_json(a.json.as_deref(), &report("transport-check", a, body))?;
    if a.assert_pass && !trace.pass {
        return Err(CliError::Assertion("transported directions leave the target direction set".into()));
    }
    Ok(())
}

fn length(a: &LengthArgs) -> CliResult<()> {
    let part = &a.partition.0;
    let res = partition_length(&a.map.map, part)?;
    let span = part[part.len() - 1] - part[0];
    let sandwich = a.map.map.declared_lipschitz().map(|l| {
        let (lo, hi) = (span / l, l * span);
        json!({"lower": lo, "upper": hi, "holds": res.refined >= lo - 1e-6 && res.refined <= hi + 1e-6})
    });
    let body = json!({
        "given": res.given,
        "refined": res.refined,
        "segments": res.segments,
        "converged": res.converged,
        "declared_lipschitz": a.map.map.declared_lipschitz(),
        "sandwich": sandwich,
    });
    emit_json(a.json.as_deref(), &report("length", a, body))
}
