// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Asymptotic directions of a point set at a marked origin.
//!
//! The direction set is approximated at finite resolution: the plane around the
//! origin is cut into annular layers `s_{k+1} ≤ ‖a − o‖ < s_k` and the circle into
//! equal angular bins. A bin is *persistent* when every populated layer from
//! the start layer inward has a point in it.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::geom::angular_distance;
use crate::math::FloatFuncs;
use crate::radii::{RadiiSequence, RegularSubsequence};
use crate::{Point, TAU};

/// Strictly decreasing annulus boundaries `s_0 > s_1 > … > s_K > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSchedule {
    scales: Vec<f64>,
}

impl ScaleSchedule {
    pub fn new(scales: Vec<f64>) -> Result<ScaleSchedule> {
        if scales.len() < 2 {
            bail!(Parameter, "a scale schedule needs at least two boundaries");
        }
        if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            bail!(Parameter, "scales must be positive and finite");
        }
        if scales.windows(2).any(|w| !(w[1] < w[0])) {
            bail!(Parameter, "scales must be strictly decreasing");
        }
        Ok(ScaleSchedule { scales })
    }

    /// Halving scales from just above `max` until one is at or below `min`.
    pub fn dyadic(max: f64, min: f64) -> Result<ScaleSchedule> {
        if !(max > 0.0 && min > 0.0 && min <= max && max.is_finite()) {
            bail!(Parameter, "dyadic schedule needs 0 < min <= max, got [{min}, {max}]");
        }
        let mut s = max * (1.0 + 1e-12);
        let mut scales = alloc::vec![s];
        loop {
            s *= 0.5;
            scales.push(s);
            if s <= min {
                break;
            }
        }
        ScaleSchedule::new(scales)
    }

    /// Dyadic schedule spanning the radii of `points` around `origin`.
    pub fn dyadic_for(points: &[Point], origin: Point) -> Result<ScaleSchedule> {
        let (lo, hi) = points
            .iter()
            .map(|p| p.distance(origin))
            .filter(|&r| r > 0.0)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        if hi == 0.0 {
            bail!(Validation, "point cloud has no point away from the origin");
        }
        ScaleSchedule::dyadic(hi, lo)
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Number of layers `K`.
    pub fn layers(&self) -> usize {
        self.scales.len() - 1
    }

    fn layer_of(&self, r: f64) -> Option<usize> {
        // layer k holds s_{k+1} ≤ r < s_k
        if !(r < self.scales[0]) || r < self.scales[self.scales.len() - 1] {
            return None;
        }
        let k = self.scales.partition_point(|&s| s > r);
        Some(k - 1)
    }
}

/// Checks that `bin_width` tiles the circle and returns the bin count.
pub fn bin_count(bin_width: f64) -> Result<usize> {
    if !(bin_width > 0.0 && bin_width <= TAU) {
        bail!(Parameter, "bin width must lie in (0, 2π], got {bin_width}");
    }
    let n = (TAU / bin_width).round();
    if (n * bin_width - TAU).abs() > TAU * 1e-9 {
        bail!(Parameter, "bin width {bin_width} does not divide 2π");
    }
    Ok(n as usize)
}

/// `count` equally spaced direction angles starting at 0.
pub fn direction_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| TAU * i as f64 / count as f64).collect()
}

/// Finite-resolution estimate of the asymptotic direction set.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    pub bin_width: f64,
    pub n_bins: usize,
    pub scales: Vec<f64>,
    /// `hits[k][j]`: layer `k` has a point in bin `j`.
    pub hits: Vec<Vec<bool>>,
    pub empty_layers: Vec<usize>,
    pub start_layer: usize,
    pub persistent: Vec<usize>,
}

impl DirectionSet {
    pub fn layers(&self) -> usize {
        self.hits.len()
    }

    pub fn bin_of(&self, angle: f64) -> usize {
        ((angle / self.bin_width) as usize).min(self.n_bins - 1)
    }

    pub fn is_persistent(&self, bin: usize) -> bool {
        self.persistent.binary_search(&bin).is_ok()
    }

    /// Angular distance from `angle` to the nearest persistent bin, `None` if there is none.
    pub fn distance_to_persistent(&self, angle: f64) -> Option<f64> {
        let w = self.bin_width;
        self.persistent
            .iter()
            .map(|&j| {
                let (lo, hi) = (j as f64 * w, (j + 1) as f64 * w);
                if angle >= lo && angle <= hi {
                    0.0
                } else {
                    angular_distance(angle, lo).min(angular_distance(angle, hi))
                }
            })
            .reduce(f64::min)
    }
}

/// Bins hit at every populated scale layer from `start_layer` on.
///
/// `start_layer` defaults to half the layer count: the coarse outer layers say
/// little about the limit at the origin.
pub fn estimate_direction_set(
    points: &[Point],
    origin: Point,
    schedule: &ScaleSchedule,
    bin_width: f64,
    start_layer: Option<usize>,
) -> Result<DirectionSet> {
    if points.is_empty() {
        bail!(Validation, "empty point cloud");
    }
    let n_bins = bin_count(bin_width)?;
    let layers = schedule.layers();
    let start = start_layer.unwrap_or(layers / 2);
    if start >= layers {
        bail!(Parameter, "start layer {start} out of range for {layers} layers");
    }
    let mut hits = alloc::vec![alloc::vec![false; n_bins]; layers];
    let mut ds = DirectionSet {
        bin_width,
        n_bins,
        scales: schedule.scales().to_vec(),
        hits: Vec::new(),
        empty_layers: Vec::new(),
        start_layer: start,
        persistent: Vec::new(),
    };
    for p in points {
        let d = *p - origin;
        let r = d.norm();
        if r == 0.0 {
            continue;
        }
        if let Some(k) = schedule.layer_of(r) {
            hits[k][ds.bin_of(d.angle())] = true;
        }
    }
    ds.empty_layers = (0..layers).filter(|&k| !hits[k].iter().any(|&h| h)).collect();
    let populated: Vec<usize> = (start..layers).filter(|k| !ds.empty_layers.contains(k)).collect();
    if !populated.is_empty() {
        ds.persistent = (0..n_bins).filter(|&j| populated.iter().all(|&k| hits[k][j])).collect();
    }
    ds.hits = hits;
    Ok(ds)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unwinding {
    /// Some direction is missed at the finest scales.
    pub unwinded: bool,
    /// Longest run of consecutive non-persistent bins, wrapping around.
    pub max_gap_bins: usize,
    /// The same run as an angle in radians.
    pub max_gap: f64,
}

pub fn is_unwinded(ds: &DirectionSet) -> Result<Unwinding> {
    if ds.layers() < 3 {
        bail!(Precondition, "need at least 3 layers, got {}", ds.layers());
    }
    let n = ds.n_bins;
    let mut persistent = alloc::vec![false; n];
    for &j in &ds.persistent {
        persistent[j] = true;
    }
    let max_gap_bins = if ds.persistent.is_empty() {
        n
    } else {
        // start just after a persistent bin so runs never straddle the seam
        let first = ds.persistent[0];
        let (mut best, mut run) = (0, 0);
        for i in 1..=n {
            if persistent[(first + i) % n] {
                run = 0;
            } else {
                run += 1;
                best = best.max(run);
            }
        }
        best
    };
    Ok(Unwinding {
        unwinded: max_gap_bins > 0,
        max_gap_bins,
        max_gap: max_gap_bins as f64 * ds.bin_width,
    })
}

/// Membership of `v` in the cone over the persistent directions, optionally
/// truncated to `‖v‖ ≤ radial_cap`. The apex always belongs.
pub fn cone_membership(
    v: Point,
    ds: &DirectionSet,
    angular_tol: f64,
    radial_cap: Option<f64>,
) -> bool {
    let r = v.norm();
    if r == 0.0 {
        return true;
    }
    if radial_cap.is_some_and(|cap| r > cap) {
        return false;
    }
    ds.distance_to_persistent(v.angle()).is_some_and(|d| d <= angular_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SspDefect {
    /// `min_a ‖a − o − t·u‖ / max(‖a − o‖, t)`.
    pub delta: f64,
    /// Some point has `‖a − o‖ ∈ [t/10, 10t]`.
    pub reliable: bool,
}

/// Relative distance from the probe `o + t·u` to the nearest cloud point.
pub fn ssp_defect(points: &[Point], origin: Point, u: Point, t: f64) -> Result<SspDefect> {
    if points.is_empty() {
        bail!(Validation, "empty point cloud");
    }
    if !(t > 0.0 && t.is_finite()) {
        bail!(Parameter, "t must be positive, got {t}");
    }
    let un = u.norm();
    if !(un > 0.0) {
        bail!(Parameter, "direction must be non-zero");
    }
    let probe = u * (t / un);
    let mut delta = f64::INFINITY;
    let mut reliable = false;
    for p in points {
        let d = *p - origin;
        let r = d.norm();
        reliable |= r >= t / 10.0 && r <= 10.0 * t;
        delta = delta.min(d.distance(probe) / r.max(t));
    }
    Ok(SspDefect { delta, reliable })
}

/// SSP defects on a grid of directions and scales.
#[derive(Debug, Clone, PartialEq)]
pub struct SspReport {
    pub directions: Vec<f64>,
    pub scales: Vec<f64>,
    /// `defects[i][j]` for direction `i` and scale `j`.
    pub defects: Vec<Vec<SspDefect>>,
    pub max_per_scale: Vec<f64>,
    pub max_defect: f64,
}

pub fn ssp_report(
    points: &[Point],
    origin: Point,
    directions: &[f64],
    scales: &[f64],
) -> Result<SspReport> {
    let defects = directions
        .iter()
        .map(|&a| {
            scales
                .iter()
                .map(|&t| ssp_defect(points, origin, Point::from_polar(1.0, a), t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let max_per_scale: Vec<f64> = (0..scales.len())
        .map(|j| defects.iter().map(|row| row[j].delta).fold(0.0, f64::max))
        .collect();
    let max_defect = max_per_scale.iter().copied().fold(0.0, f64::max);
    Ok(SspReport {
        directions: directions.to_vec(),
        scales: scales.to_vec(),
        defects,
        max_per_scale,
        max_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusDefect {
    pub n: usize,
    pub points: usize,
    /// Worst grid direction's angular distance to the nearest point in
    /// `r_{n+1} ≤ ‖a − o‖ ≤ r_n`; `None` for an empty annulus.
    pub max_defect: Option<f64>,
    pub tolerance: f64,
}

impl AnnulusDefect {
    pub fn holds(&self) -> Option<bool> {
        self.max_defect.map(|d| d <= self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TildeSspReport {
    pub rows: Vec<AnnulusDefect>,
    /// First `n` from which every populated annulus is within tolerance.
    pub threshold: Option<usize>,
    pub pass: bool,
    /// The supplied subsequence has ratios tending to 1.
    pub regular: bool,
    /// `pass && regular`.
    pub tilde_ssp: bool,
}

/// Per-annulus angular coverage check for a radii sequence.
///
/// `tolerance(n)` is the allowed defect for annulus `n`.
pub fn tilde_ssp_check<F: Fn(usize) -> f64>(
    points: &[Point],
    origin: Point,
    radii: &RadiiSequence,
    subsequence: &RegularSubsequence,
    directions: &[f64],
    tolerance: F,
) -> Result<TildeSspReport> {
    if directions.is_empty() {
        bail!(Parameter, "direction grid is empty");
    }
    let mut polar: Vec<(f64, f64)> = points
        .iter()
        .map(|p| *p - origin)
        .filter(|d| d.norm() > 0.0)
        .map(|d| (d.norm(), d.angle()))
        .collect();
    polar.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rows = Vec::with_capacity(radii.len());
    let mut angles = Vec::new();
    for n in 1..radii.len() {
        let (lo, hi) = (radii.radius(n + 1), radii.radius(n));
        let start = polar.partition_point(|q| q.0 < lo);
        let end = polar.partition_point(|q| q.0 <= hi);
        angles.clear();
        angles.extend(polar[start..end].iter().map(|q| q.1));
        angles.sort_by(f64::total_cmp);
        let max_defect = (!angles.is_empty()).then(|| {
            directions
                .iter()
                .map(|&u| nearest_angle_distance(&angles, u))
                .fold(0.0, f64::max)
        });
        rows.push(AnnulusDefect { n, points: end - start, max_defect, tolerance: tolerance(n) });
    }
    let mut threshold = None;
    for row in rows.iter().rev() {
        match row.holds() {
            Some(true) => threshold = Some(row.n),
            Some(false) => break,
            None => {}
        }
    }
    let pass = threshold.is_some();
    let regular = subsequence.success;
    Ok(TildeSspReport { rows, threshold, pass, regular, tilde_ssp: pass && regular })
}

/// Circular distance from `u` to the nearest of the sorted `angles`.
fn nearest_angle_distance(angles: &[f64], u: f64) -> f64 {
    let i = angles.partition_point(|&a| a < u);
    let after = angles[i % angles.len()];
    let before = angles[(i + angles.len() - 1) % angles.len()];
    angular_distance(u, after).min(angular_distance(u, before))
}
