// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Planar bi-Lipschitz maps, rescaled families and their grid limits.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::directions::DirectionSet;
use crate::error::{bail, Result};
use crate::geom::angular_distance;
use crate::math::FloatFuncs;
use crate::radii::RadiiSequence;
use crate::{Error, Point, TAU};

/// A map of the plane to itself.
pub trait PlanarMap: Send + Sync {
    fn apply(&self, p: Point) -> Point;

    fn apply_inverse(&self, _p: Point) -> Option<Point> {
        None
    }

    fn has_inverse(&self) -> bool {
        false
    }

    /// A known constant `L` with `‖x−y‖/L ≤ ‖h(x)−h(y)‖ ≤ L‖x−y‖`.
    fn declared_lipschitz(&self) -> Option<f64> {
        None
    }

    fn fixes_origin(&self) -> bool;
}

impl<M: PlanarMap + ?Sized> PlanarMap for &M {
    fn apply(&self, p: Point) -> Point {
        (**self).apply(p)
    }
    fn apply_inverse(&self, p: Point) -> Option<Point> {
        (**self).apply_inverse(p)
    }
    fn has_inverse(&self) -> bool {
        (**self).has_inverse()
    }
    fn declared_lipschitz(&self) -> Option<f64> {
        (**self).declared_lipschitz()
    }
    fn fixes_origin(&self) -> bool {
        (**self).fixes_origin()
    }
}

impl<M: PlanarMap + ?Sized> PlanarMap for Box<M> {
    fn apply(&self, p: Point) -> Point {
        (**self).apply(p)
    }
    fn apply_inverse(&self, p: Point) -> Option<Point> {
        (**self).apply_inverse(p)
    }
    fn has_inverse(&self) -> bool {
        (**self).has_inverse()
    }
    fn declared_lipschitz(&self) -> Option<f64> {
        (**self).declared_lipschitz()
    }
    fn fixes_origin(&self) -> bool {
        (**self).fixes_origin()
    }
}

/// Closed-form maps and their compositions.
#[derive(Debug, Clone, PartialEq)]
pub enum MapExpr {
    Identity,
    Scale(f64),
    /// Rotation by an angle in radians.
    Rotate(f64),
    /// `σ_γ(r e^{iθ}) = r e^{i(θ + γ ln r)}`.
    ShearSpiral { gamma: f64 },
    /// Applied first to last.
    Compose(Vec<MapExpr>),
}

impl MapExpr {
    pub fn scale(k: f64) -> Result<MapExpr> {
        if !(k.is_finite() && k != 0.0) {
            bail!(Parameter, "scale factor must be finite and non-zero, got {k}");
        }
        Ok(MapExpr::Scale(k))
    }

    pub fn rotate(theta: f64) -> Result<MapExpr> {
        if !theta.is_finite() {
            bail!(Parameter, "rotation angle must be finite");
        }
        Ok(MapExpr::Rotate(theta))
    }

    pub fn compose(parts: Vec<MapExpr>) -> Result<MapExpr> {
        if parts.is_empty() {
            bail!(Parameter, "empty composition");
        }
        Ok(MapExpr::Compose(parts))
    }
}

/// The shear spiral map `σ_γ`, inverse `σ_{−γ}`.
pub fn shear_spiral_map(gamma: f64) -> Result<MapExpr> {
    if !gamma.is_finite() {
        bail!(Parameter, "gamma must be finite");
    }
    Ok(MapExpr::ShearSpiral { gamma })
}

fn shear(p: Point, gamma: f64) -> Point {
    let r = p.norm();
    if r == 0.0 || gamma == 0.0 {
        return p;
    }
    p.rotate(gamma * r.ln())
}

impl PlanarMap for MapExpr {
    fn apply(&self, p: Point) -> Point {
        match self {
            MapExpr::Identity => p,
            MapExpr::Scale(k) => p * *k,
            MapExpr::Rotate(a) => p.rotate(*a),
            MapExpr::ShearSpiral { gamma } => shear(p, *gamma),
            MapExpr::Compose(parts) => parts.iter().fold(p, |q, m| m.apply(q)),
        }
    }

    fn apply_inverse(&self, p: Point) -> Option<Point> {
        Some(match self {
            MapExpr::Identity => p,
            MapExpr::Scale(k) => p / *k,
            MapExpr::Rotate(a) => p.rotate(-*a),
            MapExpr::ShearSpiral { gamma } => shear(p, -*gamma),
            MapExpr::Compose(parts) => {
                let mut q = p;
                for m in parts.iter().rev() {
                    q = m.apply_inverse(q)?;
                }
                q
            }
        })
    }

    fn has_inverse(&self) -> bool {
        true
    }

    fn declared_lipschitz(&self) -> Option<f64> {
        Some(match self {
            MapExpr::Identity | MapExpr::Rotate(_) => 1.0,
            MapExpr::Scale(k) => k.abs().max(1.0 / k.abs()),
            MapExpr::ShearSpiral { gamma } => (gamma.abs() + (gamma * gamma + 4.0).sqrt()) / 2.0,
            MapExpr::Compose(parts) => {
                parts.iter().map(|m| m.declared_lipschitz().unwrap_or(f64::INFINITY)).product()
            }
        })
    }

    fn fixes_origin(&self) -> bool {
        match self {
            MapExpr::Compose(parts) => parts.iter().all(|m| m.fixes_origin()),
            _ => true,
        }
    }
}

/// A map given by a closure, without inverse.
#[derive(Clone)]
pub struct FnMap<F> {
    f: F,
    fixes_origin: bool,
    lipschitz: Option<f64>,
}

impl<F: Fn(Point) -> Point + Send + Sync> FnMap<F> {
    pub fn new(f: F, fixes_origin: bool) -> FnMap<F> {
        FnMap { f, fixes_origin, lipschitz: None }
    }

    pub fn with_lipschitz(mut self, l: f64) -> FnMap<F> {
        self.lipschitz = Some(l);
        self
    }
}

impl<F: Fn(Point) -> Point + Send + Sync> PlanarMap for FnMap<F> {
    fn apply(&self, p: Point) -> Point {
        (self.f)(p)
    }
    fn declared_lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }
    fn fixes_origin(&self) -> bool {
        self.fixes_origin
    }
}

pub fn apply_map<M: PlanarMap + ?Sized>(map: &M, points: &[Point]) -> Vec<Point> {
    points.iter().map(|&p| map.apply(p)).collect()
}

pub fn apply_inverse<M: PlanarMap + ?Sized>(map: &M, points: &[Point]) -> Result<Vec<Point>> {
    if !map.has_inverse() {
        bail!(Capability, "map has no inverse");
    }
    points
        .iter()
        .map(|&p| map.apply_inverse(p).ok_or_else(|| Error::Capability("inverse undefined".into())))
        .collect()
}

/// Sampling region, centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

impl Region {
    fn bounds(self) -> Result<(f64, f64)> {
        let (lo, hi) = match self {
            Region::Disk { radius } => (0.0, radius),
            Region::Annulus { inner, outer } => (inner, outer),
        };
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            bail!(Parameter, "invalid region radii [{lo}, {hi}]");
        }
        Ok((lo, hi))
    }

    /// Outer radius.
    pub fn scale(self) -> f64 {
        match self {
            Region::Disk { radius } => radius,
            Region::Annulus { outer, .. } => outer,
        }
    }
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Area-uniform sample from the region `lo ≤ ‖x‖ ≤ hi`.
fn sample_region(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Point {
    let u = unit_f64(rng);
    let r = (lo * lo + u * (hi * hi - lo * lo)).sqrt();
    Point::from_polar(r, TAU * unit_f64(rng))
}

pub const MIN_DISTORTION_PAIRS: usize = 1000;
const NEAR_DIAGONAL_BASES: usize = 32;
const NEAR_DIAGONAL_DIRECTIONS: usize = 64;
const NEAR_DIAGONAL_DISTANCES: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

/// Sampled distortion. `l_est` never exceeds the true constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    pub l_est: f64,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub pairs: usize,
    pub skipped: usize,
}

/// Lower bound on the bi-Lipschitz constant of `map` over `region`.
pub fn distortion_estimate<M: PlanarMap + ?Sized>(
    map: &M,
    region: Region,
    n_pairs: usize,
    seed: u64,
) -> Result<Distortion> {
    if n_pairs < MIN_DISTORTION_PAIRS {
        bail!(Parameter, "need at least {MIN_DISTORTION_PAIRS} pairs, got {n_pairs}");
    }
    let (lo, hi) = region.bounds()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Distortion {
        l_est: 0.0,
        max_ratio: 0.0,
        min_ratio: f64::INFINITY,
        pairs: 0,
        skipped: 0,
    };
    let mut record = |x: Point, y: Point| {
        let d = x.distance(y);
        if d == 0.0 {
            acc.skipped += 1;
            return;
        }
        let rho = map.apply(x).distance(map.apply(y)) / d;
        acc.pairs += 1;
        acc.max_ratio = acc.max_ratio.max(rho);
        acc.min_ratio = acc.min_ratio.min(rho);
    };
    for _ in 0..n_pairs {
        let x = sample_region(&mut rng, lo, hi);
        let y = sample_region(&mut rng, lo, hi);
        record(x, y);
    }
    let scale = region.scale();
    for _ in 0..NEAR_DIAGONAL_BASES {
        let x = sample_region(&mut rng, lo, hi);
        for j in 0..NEAR_DIAGONAL_DIRECTIONS {
            let dir = Point::from_polar(1.0, TAU * j as f64 / NEAR_DIAGONAL_DIRECTIONS as f64);
            for &h in &NEAR_DIAGONAL_DISTANCES {
                record(x, x + dir * (h * scale));
            }
        }
    }
    if acc.pairs == 0 {
        bail!(Sampling, "all sampled pairs were degenerate");
    }
    acc.l_est = acc.max_ratio.max(1.0 / acc.min_ratio);
    Ok(acc)
}

/// `x ↦ h(r x)/r`.
#[derive(Clone, Copy)]
pub struct Rescaled<M> {
    pub base: M,
    pub r: f64,
}

impl<M: PlanarMap> PlanarMap for Rescaled<M> {
    fn apply(&self, p: Point) -> Point {
        self.base.apply(p * self.r) / self.r
    }
    fn apply_inverse(&self, p: Point) -> Option<Point> {
        self.base.apply_inverse(p * self.r).map(|q| q / self.r)
    }
    fn has_inverse(&self) -> bool {
        self.base.has_inverse()
    }
    fn declared_lipschitz(&self) -> Option<f64> {
        self.base.declared_lipschitz()
    }
    fn fixes_origin(&self) -> bool {
        true
    }
}

/// The maps `h_k(x) = h(r_k x)/r_k` for decreasing scales `r_k`.
pub struct RescaledFamily<M> {
    base: M,
    scales: Vec<f64>,
}

pub fn rescaled_family<M: PlanarMap>(map: M, scales: Vec<f64>) -> Result<RescaledFamily<M>> {
    if !map.fixes_origin() {
        bail!(Precondition, "rescaling needs a map fixing the origin");
    }
    if scales.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        bail!(Parameter, "scales must be positive and finite");
    }
    if scales.windows(2).any(|w| !(w[1] < w[0])) {
        bail!(Parameter, "scales must be strictly decreasing");
    }
    Ok(RescaledFamily { base: map, scales })
}

impl<M: PlanarMap> RescaledFamily<M> {
    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn member(&self, k: usize) -> Rescaled<&M> {
        Rescaled { base: &self.base, r: self.scales[k] }
    }
}

pub const AA_MIN_MEMBERS: usize = 20;
pub const AA_MIN_PROBES: usize = 100;

/// Grid table of a limit map.
#[derive(Debug, Clone, PartialEq)]
pub struct AaLimit {
    /// Member indices of the selected cluster, increasing.
    pub selected: Vec<usize>,
    pub grid: Vec<Point>,
    pub limit: Vec<Point>,
    /// `max ‖h̄(x)−h̄(y)‖/‖x−y‖` over grid pairs.
    pub modulus: f64,
    pub declared_lipschitz: Option<f64>,
    pub tol: f64,
}

impl AaLimit {
    /// The limit table respects the family's declared constant.
    pub fn modulus_ok(&self) -> bool {
        self.declared_lipschitz.is_none_or(|l| self.modulus <= l + self.tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AaOutcome {
    Converged(AaLimit),
    NoConvergentSubsequence { largest_cluster: usize },
}

fn sup_distance(a: &[Point], b: &[Point]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p.distance(*q)).fold(0.0, f64::max)
}

/// Clusters family members by sup-distance on `grid` and averages the largest cluster.
pub fn aa_limit<M: PlanarMap>(family: &RescaledFamily<M>, grid: &[Point], tol: f64) -> Result<AaOutcome> {
    if family.len() < AA_MIN_MEMBERS {
        bail!(Precondition, "need at least {AA_MIN_MEMBERS} family members, got {}", family.len());
    }
    if grid.len() < AA_MIN_PROBES {
        bail!(Precondition, "need at least {AA_MIN_PROBES} probes, got {}", grid.len());
    }
    if grid.iter().any(|p| !(p.norm() >= 0.5 - 1e-12 && p.norm() <= 2.0 + 1e-12)) {
        bail!(Precondition, "probes must lie in the annulus 1/2 <= |x| <= 2");
    }
    if !(tol > 0.0) {
        bail!(Parameter, "tolerance must be positive");
    }
    let evals: Vec<Vec<Point>> = (0..family.len()).map(|k| apply_map(&family.member(k), grid)).collect();
    let m = evals.len();
    let mut close = alloc::vec![alloc::vec![false; m]; m];
    for i in 0..m {
        close[i][i] = true;
        for j in i + 1..m {
            let c = sup_distance(&evals[i], &evals[j]) <= tol;
            close[i][j] = c;
            close[j][i] = c;
        }
    }
    let seed = (0..m)
        .max_by_key(|&i| (close[i].iter().filter(|&&c| c).count(), core::cmp::Reverse(i)))
        .unwrap_or(0);
    let mut selected = alloc::vec![seed];
    for j in (0..m).filter(|&j| j != seed) {
        if close[seed][j] && selected.iter().all(|&s: &usize| close[s][j]) {
            selected.push(j);
        }
    }
    selected.sort_unstable();
    if selected.len() < 3 {
        return Ok(AaOutcome::NoConvergentSubsequence { largest_cluster: selected.len() });
    }
    let w = 1.0 / selected.len() as f64;
    let limit: Vec<Point> = (0..grid.len())
        .map(|g| selected.iter().fold(Point::ORIGIN, |acc, &k| acc + evals[k][g]) * w)
        .collect();
    let mut modulus: f64 = 0.0;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let d = grid[i].distance(grid[j]);
            if d > 0.0 {
                modulus = modulus.max(limit[i].distance(limit[j]) / d);
            }
        }
    }
    Ok(AaOutcome::Converged(AaLimit {
        selected,
        grid: grid.to_vec(),
        limit,
        modulus,
        declared_lipschitz: family.base.declared_lipschitz(),
        tol,
    }))
}

/// `rings × per_ring` probes on a polar grid filling `1/2 ≤ ‖x‖ ≤ 2`.
pub fn probe_grid(rings: usize, per_ring: usize) -> Vec<Point> {
    let mut grid = Vec::with_capacity(rings * per_ring);
    for i in 0..rings {
        let r = if rings == 1 { 1.0 } else { 0.5 + 1.5 * i as f64 / (rings - 1) as f64 };
        for j in 0..per_ring {
            grid.push(Point::from_polar(r, TAU * j as f64 / per_ring as f64));
        }
    }
    grid
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportEntry {
    pub k: usize,
    pub n: usize,
    /// The annulus point closest in direction to `u`.
    pub point: Point,
    /// `‖a − r_n u‖ / r_n`.
    pub proximity: f64,
    /// Angle from `h(a)` to the nearest persistent target bin.
    pub image_defect: f64,
    /// Angle from `h_k(u) = h(r_n u)/r_n` to the nearest persistent target bin.
    pub blowup_defect: f64,
    /// Larger of the two.
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportTrace {
    pub entries: Vec<TransportEntry>,
    /// Indices whose annulus held no point within the angular tolerance of `u`.
    pub skipped: Vec<usize>,
    pub bin_width: f64,
    pub pass: bool,
}

impl TransportTrace {
    /// Entries from the second half of the trace on.
    pub fn tail(&self) -> &[TransportEntry] {
        &self.entries[self.entries.len() / 2..]
    }
}

/// Follows `u` through the rescaled images `h(a_{n_k})` and checks the
/// resulting directions against the direction set of `h(A)`.
///
/// Passes when every entry in the second half of the trace is within one
/// target bin.
pub fn transported_direction_check<M: PlanarMap + ?Sized>(
    map: &M,
    cloud: &[Point],
    radii: &RadiiSequence,
    indices: &[usize],
    u: Point,
    angular_tol: f64,
    target: &DirectionSet,
) -> Result<TransportTrace> {
    if !map.fixes_origin() {
        bail!(Precondition, "map must fix the origin");
    }
    let un = u.norm();
    if !(un > 0.0) {
        bail!(Parameter, "direction must be non-zero");
    }
    let u = u / un;
    let ua = u.angle();
    let mut polar: Vec<(f64, Point)> = cloud.iter().map(|&p| (p.norm(), p)).filter(|q| q.0 > 0.0).collect();
    polar.sort_by(|a, b| a.0.total_cmp(&b.0));
    let defect_of = |p: Point| {
        if p.norm() == 0.0 {
            return f64::INFINITY;
        }
        target.distance_to_persistent(p.angle()).unwrap_or(f64::INFINITY)
    };
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (k, &n) in indices.iter().enumerate() {
        if n == 0 || n + 1 > radii.len() {
            bail!(Range, "index {n} outside 1..{}", radii.len().saturating_sub(1));
        }
        let (lo, hi) = (radii.radius(n + 1), radii.radius(n));
        let start = polar.partition_point(|q| q.0 < lo);
        let end = polar.partition_point(|q| q.0 <= hi);
        let best = polar[start..end]
            .iter()
            .map(|q| (angular_distance(q.1.angle(), ua), q.1))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        let a = match best {
            Some((d, a)) if d <= angular_tol => a,
            _ => {
                skipped.push(n);
                continue;
            }
        };
        let r = hi;
        let image_defect = defect_of(map.apply(a));
        let blowup_defect = defect_of(map.apply(u * r) / r);
        entries.push(TransportEntry {
            k,
            n,
            point: a,
            proximity: a.distance(u * r) / r,
            image_defect,
            blowup_defect,
            defect: image_defect.max(blowup_defect),
        });
    }
    let mut trace = TransportTrace { entries, skipped, bin_width: target.bin_width, pass: false };
    trace.pass = !trace.entries.is_empty() && trace.tail().iter().all(|e| e.defect <= target.bin_width);
    Ok(trace)
}

pub const MAX_PARTITION_SEGMENTS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionLength {
    /// Polyline length of the image along the given partition.
    pub given: f64,
    /// Length after bisection refinement.
    pub refined: f64,
    pub segments: usize,
    pub converged: bool,
}

fn polyline_length<M: PlanarMap + ?Sized>(map: &M, ts: &[f64]) -> f64 {
    let mut prev = map.apply(Point::new(ts[0], 0.0));
    let mut sum = 0.0;
    for &t in &ts[1..] {
        let q = map.apply(Point::new(t, 0.0));
        sum += q.distance(prev);
        prev = q;
    }
    sum
}

/// Image length of the x-axis segment spanned by `partition`.
pub fn partition_length<M: PlanarMap + ?Sized>(map: &M, partition: &[f64]) -> Result<PartitionLength> {
    if partition.len() < 2 {
        bail!(Parameter, "a partition needs at least two points");
    }
    if partition.iter().any(|t| !t.is_finite()) || partition.windows(2).any(|w| !(w[0] < w[1])) {
        bail!(Parameter, "partition must be finite and strictly increasing");
    }
    let span = partition[partition.len() - 1] - partition[0];
    let given = polyline_length(map, partition);
    let mut ts = partition.to_vec();
    let mut current = given;
    let mut converged = false;
    while 2 * (ts.len() - 1) <= MAX_PARTITION_SEGMENTS {
        let mut finer = Vec::with_capacity(2 * ts.len() - 1);
        for w in ts.windows(2) {
            finer.push(w[0]);
            finer.push(0.5 * (w[0] + w[1]));
        }
        finer.push(ts[ts.len() - 1]);
        let next = polyline_length(map, &finer);
        let increment = next - current;
        ts = finer;
        current = next;
        if increment < 1e-6 * span {
            converged = true;
            break;
        }
    }
    Ok(PartitionLength { given, refined: current, segments: ts.len() - 1, converged })
}
