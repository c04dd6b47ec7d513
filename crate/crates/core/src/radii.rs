// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Winding radii, decay classification and regular-subsequence extraction.
//!
//! For radii `r_1 > r_2 > …` with reciprocals `a_n = 1/r_n`, the ratio
//! `b_n = a_{n+1}/a_n` defines the exceptional sets
//! `R_m = {n : b_n ≥ 1 + 1/m}`. With an increasing cutoff schedule `f_1`, the
//! union `R = ∪_m (R_m ∩ [f_1(m), ∞))` is sparse whenever the decay is
//! sub-exponential, and every index outside `R` past `f_1(m)` has `b_n < 1 + 1/m`.
//!
//! Everything is computed in log space: for exponential decay `r_n` underflows
//! long before `N` gets interesting, but `ln r_n` does not.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::FloatFuncs;
use crate::profiles::DecayProfile;
use crate::TAU;

/// Default threshold `θ` on `ln(a_n)/n` used by [`subexp_classify`].
pub const DEFAULT_RATE_THRESHOLD: f64 = 0.05;

/// Closed-form growth bound `g` with `a_n ≤ g(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthBound {
    /// `g(n) = e^{2πa(n−1)}`
    Exponential { a: f64 },
    /// `g(n) = (1 + 2π(n−1))^p`
    PowerLaw { p: f64 },
    /// `g(n) = e^{c(2π(n−1))^β}`
    StretchedExp { beta: f64, c: f64 },
    /// `g(n) = a_n`: the tightest admissible bound, used for tabulated data.
    Data,
}

/// The prefix `r_1, …, r_N` of a strictly decreasing radii sequence in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiiSequence {
    ln_radii: Vec<f64>,
    growth: GrowthBound,
    source: Option<DecayProfile>,
}

/// `r_n = φ(2π(n−1))` for `n = 1..=count`.
pub fn winding_radii(profile: &DecayProfile, count: usize) -> Result<RadiiSequence> {
    RadiiSequence::from_profile(profile, count)
}

impl RadiiSequence {
    pub fn from_profile(profile: &DecayProfile, count: usize) -> Result<RadiiSequence> {
        profile.validate()?;
        if count < 2 {
            bail!(Parameter, "need at least 2 radii, got {count}");
        }
        if let DecayProfile::UserTable(tab) = profile {
            let needed = TAU * (count - 1) as f64;
            if needed > tab.t_max() {
                bail!(
                    Range,
                    "{count} windings need t up to {needed}, the table ends at {}",
                    tab.t_max()
                );
            }
        }
        let ln_radii = (0..count)
            .map(|k| profile.ln_eval(TAU * k as f64))
            .collect::<Result<Vec<_>>>()?;
        let growth = match *profile {
            DecayProfile::Exponential { a } => GrowthBound::Exponential { a },
            DecayProfile::PowerLaw { p } => GrowthBound::PowerLaw { p },
            DecayProfile::StretchedExp { beta, c } => GrowthBound::StretchedExp { beta, c },
            DecayProfile::UserTable(_) => GrowthBound::Data,
        };
        let seq = RadiiSequence { ln_radii, growth, source: Some(profile.clone()) };
        seq.validate()?;
        Ok(seq)
    }

    /// Radii given directly; the growth bound is the data itself.
    pub fn from_radii(radii: &[f64]) -> Result<RadiiSequence> {
        Self::from_ln_radii(radii.iter().map(|r| r.ln()).collect())
    }

    pub fn from_ln_radii(ln_radii: Vec<f64>) -> Result<RadiiSequence> {
        if ln_radii.len() < 2 {
            bail!(Parameter, "need at least 2 radii, got {}", ln_radii.len());
        }
        let seq = RadiiSequence { ln_radii, growth: GrowthBound::Data, source: None };
        seq.validate()?;
        Ok(seq)
    }

    fn validate(&self) -> Result<()> {
        for (i, &l) in self.ln_radii.iter().enumerate() {
            if !(l.is_finite() && l <= 0.0) {
                bail!(Validation, "r_{} must lie in (0, 1] (ln r = {l})", i + 1);
            }
            if i > 0 && !(l < self.ln_radii[i - 1]) {
                bail!(Validation, "radii must be strictly decreasing at n = {}", i + 1);
            }
        }
        Ok(())
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.ln_radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_radii.is_empty()
    }

    /// Smallest `n` with `a_n ≥ 1`; always 1 since `r_1 ≤ 1`.
    pub fn first_unit_index(&self) -> usize {
        1
    }

    pub fn growth(&self) -> GrowthBound {
        self.growth
    }

    /// The profile the radii were sampled from, if any.
    pub fn source(&self) -> Option<&DecayProfile> {
        self.source.as_ref()
    }

    /// `ln r_n` (1-based).
    pub fn ln_radius(&self, n: usize) -> f64 {
        self.ln_radii[n - 1]
    }

    /// `r_n` (1-based); may underflow to 0 for fast decay.
    pub fn radius(&self, n: usize) -> f64 {
        self.ln_radius(n).exp()
    }

    /// `a_n = 1/r_n`.
    pub fn reciprocal(&self, n: usize) -> f64 {
        1.0 / self.radius(n)
    }

    /// `ln a_n`.
    pub fn ln_reciprocal(&self, n: usize) -> f64 {
        -self.ln_radius(n)
    }

    /// `ln b_n = ln(a_{n+1}/a_n)` for `1 ≤ n < N`.
    pub fn ln_ratio(&self, n: usize) -> f64 {
        self.ln_radius(n) - self.ln_radius(n + 1)
    }

    /// `b_n = a_{n+1}/a_n`.
    pub fn ratio(&self, n: usize) -> f64 {
        self.ln_ratio(n).exp()
    }

    /// `r_{n+1}/r_n = 1/b_n`.
    pub fn successor_ratio(&self, n: usize) -> f64 {
        (-self.ln_ratio(n)).exp()
    }

    /// `ln g(n)`.
    pub fn ln_growth_bound(&self, n: usize) -> f64 {
        let x = TAU * (n as f64 - 1.0);
        match self.growth {
            GrowthBound::Exponential { a } => a * x,
            GrowthBound::PowerLaw { p } => p * x.ln_1p(),
            GrowthBound::StretchedExp { beta, c } => c * x.powf(beta),
            GrowthBound::Data => self.ln_reciprocal(n.min(self.len())),
        }
    }

    /// `lim ln g(n)/n` for the closed-form bounds.
    pub fn growth_rate_limit(&self) -> Option<f64> {
        match self.growth {
            GrowthBound::Exponential { a } => Some(TAU * a),
            GrowthBound::PowerLaw { .. } | GrowthBound::StretchedExp { .. } => Some(0.0),
            GrowthBound::Data => None,
        }
    }
}

/// Outcome of the sub-exponential decay test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayVerdict {
    SubExponential,
    NotSubExponential,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayClassification {
    pub verdict: DecayVerdict,
    /// The verdict the trace alone supports.
    pub trace_verdict: DecayVerdict,
    /// `(n, ln(a_n)/n)` over the trailing window.
    pub trace: Vec<(usize, f64)>,
    pub final_rate: f64,
    /// Intercept of a least-squares fit `d_n ≈ L + B/n` over the window.
    pub limit_estimate: f64,
    pub closed_form_limit: Option<f64>,
    pub threshold: f64,
}

/// Tests whether `ln(a_n)/n → 0` on the trailing `window` indices.
///
/// Named families get their verdict from the closed-form growth bound; the
/// trace is still computed and reported. Tabulated data relies on the trace.
pub fn subexp_classify(
    radii: &RadiiSequence,
    window: usize,
    threshold: f64,
) -> Result<DecayClassification> {
    let n_total = radii.len();
    if window < 10 {
        bail!(Parameter, "window must be >= 10, got {window}");
    }
    if window > n_total {
        bail!(Parameter, "window {window} exceeds N = {n_total}");
    }
    if !(threshold > 0.0) {
        bail!(Parameter, "threshold must be > 0, got {threshold}");
    }
    let trace: Vec<(usize, f64)> = (n_total - window + 1..=n_total)
        .map(|n| (n, radii.ln_reciprocal(n) / n as f64))
        .collect();
    let final_rate = trace[trace.len() - 1].1;

    // least squares on x = 1/n
    let k = trace.len() as f64;
    let (sx, sy) = trace
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(n, d)| (sx + 1.0 / n as f64, sy + d));
    let (mx, my) = (sx / k, sy / k);
    let (sxx, sxy) = trace.iter().fold((0.0, 0.0), |(sxx, sxy), &(n, d)| {
        let dx = 1.0 / n as f64 - mx;
        (sxx + dx * dx, sxy + dx * (d - my))
    });
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let limit_estimate = my - slope * mx;

    let decreasing = final_rate <= trace[0].1;
    let min_rate = trace.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
    let trace_verdict = if decreasing && final_rate < threshold {
        DecayVerdict::SubExponential
    } else if min_rate > threshold && limit_estimate > threshold {
        DecayVerdict::NotSubExponential
    } else {
        DecayVerdict::Inconclusive
    };
    let closed_form_limit = radii.growth_rate_limit();
    let verdict = match closed_form_limit {
        Some(l) if l == 0.0 => DecayVerdict::SubExponential,
        Some(_) => DecayVerdict::NotSubExponential,
        None => trace_verdict,
    };
    Ok(DecayClassification {
        verdict,
        trace_verdict,
        trace,
        final_rate,
        limit_estimate,
        closed_form_limit,
        threshold,
    })
}

fn in_level(ln_b: f64, m: usize) -> bool {
    ln_b >= (1.0 / m as f64).ln_1p()
}

/// Smallest `m` with `b_n ≥ 1 + 1/m`, i.e. the first exceptional set containing `n`.
fn entry_level(ln_b: f64) -> Option<usize> {
    if !(ln_b > 0.0) {
        return None;
    }
    let guess = (1.0 / ln_b.exp_m1()).ceil();
    if !(guess < 1e15) {
        return None;
    }
    let mut m = (guess as usize).max(1);
    while m > 1 && in_level(ln_b, m - 1) {
        m -= 1;
    }
    while !in_level(ln_b, m) {
        m += 1;
    }
    Some(m)
}

fn entry_levels(radii: &RadiiSequence) -> Vec<Option<usize>> {
    (1..radii.len()).map(|n| entry_level(radii.ln_ratio(n))).collect()
}

/// `R_m ∩ [1, N)` for `m = 1..=m_max`, each in increasing order.
///
/// `b_n` needs `r_{n+1}`, so the scanned range stops at `N − 1`.
pub fn exceptional_sets(radii: &RadiiSequence, m_max: usize) -> Result<Vec<Vec<usize>>> {
    if m_max < 1 {
        bail!(Parameter, "m_max must be >= 1");
    }
    Ok(sets_from_levels(&entry_levels(radii), m_max))
}

fn sets_from_levels(levels: &[Option<usize>], m_max: usize) -> Vec<Vec<usize>> {
    let mut sets = alloc::vec![Vec::new(); m_max];
    for (i, lvl) in levels.iter().enumerate() {
        if let Some(l) = *lvl {
            for set in sets.iter_mut().skip(l - 1) {
                set.push(i + 1);
            }
        }
    }
    sets
}

/// How the cutoff schedule `f_1` is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum F1Spec {
    /// `f_1(1) = 1`, and for `m ≥ 2`
    /// `f_1(m) = max(f_1(m−1) + 1, min{N₀ : ln g(n)·m³ ≤ n for all n ∈ [N₀, N]})`.
    Auto,
    /// `f_1(1), f_1(2), …`, strictly increasing and positive.
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub checkpoint: usize,
    pub count: usize,
    pub density: f64,
}

/// Exceptional sets, their cut-off union `R` and the retained complement.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsequenceExtraction {
    /// `N`; indices range over `[1, N − 1]`.
    pub n: usize,
    pub m_max: usize,
    /// `f_1(1), …, f_1(M)`; beyond `M` the schedule is treated as `+∞`.
    pub f1: Vec<usize>,
    /// Set when the automatic schedule stopped before `m_max`.
    pub f1_warning: Option<String>,
    /// `R_m ∩ [1, N)` for `m = 1..=m_max`.
    pub exceptional_sets: Vec<Vec<usize>>,
    pub union: Vec<usize>,
    pub retained: Vec<usize>,
    /// `b_n` on the retained indices.
    pub ratio_trace: Vec<f64>,
    pub density_trace: Vec<DensityPoint>,
    pub decay_verdict: DecayVerdict,
    pub f2_final: usize,
    pub ln_g_final: f64,
    /// `ln g(N)·f_2(N)²/N`.
    pub diagnostic_ratio: f64,
    pub checkpoints: Vec<usize>,
    ln_g_checkpoints: Vec<f64>,
    levels: Vec<Option<usize>>,
}

impl SubsequenceExtraction {
    /// `f_1(m)`, or `None` past the table.
    pub fn f1_at(&self, m: usize) -> Option<usize> {
        self.f1.get(m.checked_sub(1)?).copied()
    }

    /// `f_2(n) = min{m : f_1(m) ≥ n}`; `M + 1` beyond the table.
    pub fn f2(&self, n: usize) -> usize {
        self.f1.partition_point(|&f| f < n) + 1
    }

    /// Largest `m ≤ M` with `f_1(m) ≤ n` (0 if none).
    fn active_level(&self, n: usize) -> usize {
        self.f1.partition_point(|&f| f <= n)
    }
}

/// Powers of two below `n`, then `n`.
pub fn checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = 1usize;
    while c < n {
        out.push(c);
        c *= 2;
    }
    out.push(n);
    out
}

fn auto_f1(radii: &RadiiSequence, m_max: Option<usize>) -> (Vec<usize>, Option<String>) {
    let n_total = radii.len();
    let mut f1 = alloc::vec![1usize];
    let limit = m_max.unwrap_or(usize::MAX);
    let mut m = 2usize;
    while m <= limit {
        let cube = (m as f64).powf(3.0);
        let ok = |n: usize| radii.ln_growth_bound(n) * cube <= n as f64;
        if !ok(n_total) {
            let warning = alloc::format!(
                "automatic f_1 stops at m = {}: ln g(n)·{m}³ ≤ n fails at n = N = {n_total}",
                m - 1
            );
            return (f1, m_max.map(|_| warning));
        }
        let mut n0 = n_total;
        while n0 > 1 && ok(n0 - 1) {
            n0 -= 1;
        }
        let next = (f1[f1.len() - 1] + 1).max(n0);
        if next > n_total {
            let warning = alloc::format!(
                "automatic f_1 stops at m = {}: f_1({m}) would exceed N = {n_total}",
                m - 1
            );
            return (f1, m_max.map(|_| warning));
        }
        f1.push(next);
        m += 1;
    }
    if let Some(mm) = m_max {
        f1.truncate(mm.max(1));
    }
    (f1, None)
}

/// Builds `R_m`, the schedule `f_1`/`f_2`, the union `R` and the retained indices.
///
/// `m_max = None` lets the automatic schedule run as far as it can within `[1, N]`.
pub fn build_exceptional_union(
    radii: &RadiiSequence,
    f1_spec: &F1Spec,
    m_max: Option<usize>,
) -> Result<SubsequenceExtraction> {
    let n_total = radii.len();
    if m_max == Some(0) {
        bail!(Parameter, "m_max must be >= 1");
    }
    let (f1, f1_warning) = match f1_spec {
        F1Spec::Auto => auto_f1(radii, m_max),
        F1Spec::Explicit(table) => {
            if table.is_empty() || table[0] < 1 || table.windows(2).any(|w| w[1] <= w[0]) {
                bail!(Parameter, "explicit f_1 must be positive and strictly increasing");
            }
            let mut t = table.clone();
            if let Some(mm) = m_max {
                t.truncate(mm);
            }
            (t, None)
        }
    };
    let m_listed = m_max.unwrap_or(f1.len()).max(1);
    let levels = entry_levels(radii);
    let exceptional_sets = sets_from_levels(&levels, m_listed);

    let window = (n_total / 10).max(10);
    let decay_verdict = if window <= n_total {
        subexp_classify(radii, window, DEFAULT_RATE_THRESHOLD)?.verdict
    } else {
        match radii.growth_rate_limit() {
            Some(l) if l == 0.0 => DecayVerdict::SubExponential,
            Some(_) => DecayVerdict::NotSubExponential,
            None => DecayVerdict::Inconclusive,
        }
    };

    let cps = checkpoints(n_total);
    let ln_g_checkpoints: Vec<f64> = cps.iter().map(|&c| radii.ln_growth_bound(c)).collect();
    let mut ex = SubsequenceExtraction {
        n: n_total,
        m_max: m_listed,
        f1,
        f1_warning,
        exceptional_sets,
        union: Vec::new(),
        retained: Vec::new(),
        ratio_trace: Vec::new(),
        density_trace: Vec::new(),
        decay_verdict,
        f2_final: 0,
        ln_g_final: radii.ln_growth_bound(n_total),
        diagnostic_ratio: 0.0,
        checkpoints: cps,
        ln_g_checkpoints,
        levels,
    };
    for n in 1..n_total {
        let active = ex.active_level(n);
        match ex.levels[n - 1] {
            Some(l) if l <= active => ex.union.push(n),
            _ => {
                ex.retained.push(n);
                ex.ratio_trace.push(radii.ratio(n));
            }
        }
    }
    ex.density_trace = ex
        .checkpoints
        .iter()
        .map(|&c| {
            let count = ex.union.partition_point(|&n| n <= c);
            DensityPoint { checkpoint: c, count, density: count as f64 / c as f64 }
        })
        .collect();
    ex.f2_final = ex.f2(n_total);
    ex.diagnostic_ratio = ex.ln_g_final * (ex.f2_final as f64).powf(2.0) / n_total as f64;
    Ok(ex)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimRow {
    pub checkpoint: usize,
    pub count: usize,
    pub bound: f64,
    pub holds: bool,
}

/// One counting bound evaluated at every checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimCheck {
    /// The level `m` for the per-level bound, `None` for the union bound.
    pub m: Option<usize>,
    pub rows: Vec<ClaimRow>,
    /// First checkpoint at which the bound holds.
    pub n0: Option<usize>,
    /// Checkpoints past `n0` where it fails again.
    pub violations_after_n0: Vec<usize>,
}

impl ClaimCheck {
    fn from_rows(m: Option<usize>, rows: Vec<ClaimRow>) -> ClaimCheck {
        let n0 = rows.iter().find(|r| r.holds).map(|r| r.checkpoint);
        let violations_after_n0 = match n0 {
            Some(n0) => rows
                .iter()
                .filter(|r| r.checkpoint > n0 && !r.holds)
                .map(|r| r.checkpoint)
                .collect(),
            None => Vec::new(),
        };
        ClaimCheck { m, rows, n0, violations_after_n0 }
    }

    /// Holds at `n0` and at every later checkpoint.
    pub fn holds_eventually(&self) -> bool {
        self.n0.is_some() && self.violations_after_n0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimReport {
    /// `|R_m ∩ [1,N']| ≤ 3·m·ln g(N')` for `m = 1..=m_max`.
    pub per_level: Vec<ClaimCheck>,
    /// `|R ∩ [1,N']| ≤ 3·ln g(N')·f_2(N')²`.
    pub union: ClaimCheck,
}

/// Compares the exceptional-set counts against both counting bounds at every checkpoint.
pub fn verify_claim_bounds(ex: &SubsequenceExtraction) -> Result<ClaimReport> {
    if ex.n < 100 {
        bail!(Precondition, "claim verification needs N >= 100, got {}", ex.n);
    }
    let per_level = (1..=ex.m_max)
        .map(|m| {
            let set = &ex.exceptional_sets[m - 1];
            let rows = ex
                .checkpoints
                .iter()
                .zip(&ex.ln_g_checkpoints)
                .map(|(&c, &lng)| {
                    let count = set.partition_point(|&n| n <= c);
                    let bound = 3.0 * m as f64 * lng;
                    ClaimRow { checkpoint: c, count, bound, holds: count as f64 <= bound }
                })
                .collect();
            ClaimCheck::from_rows(Some(m), rows)
        })
        .collect();
    let rows = ex
        .checkpoints
        .iter()
        .zip(&ex.ln_g_checkpoints)
        .zip(&ex.density_trace)
        .map(|((&c, &lng), d)| {
            let f2 = ex.f2(c) as f64;
            let bound = 3.0 * lng * f2 * f2;
            ClaimRow { checkpoint: c, count: d.count, bound, holds: d.count as f64 <= bound }
        })
        .collect();
    Ok(ClaimReport { per_level, union: ClaimCheck::from_rows(None, rows) })
}

/// Indices `(n_k)` with `r_{n_k+1}/r_{n_k} → 1`, plus the evidence for it.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularSubsequence {
    pub indices: Vec<usize>,
    /// `r_{n_k+1}/r_{n_k}`.
    pub ratio_trace: Vec<f64>,
    /// Max of `|r_{n_k+1}/r_{n_k} − 1|` over the last decile; `None` if nothing is retained.
    pub diagnostic: Option<f64>,
    /// `1/f_2(N)`.
    pub threshold: f64,
    pub success: bool,
    /// Range of `r_{n+1}/r_n` over all of `[1, N)`.
    pub successor_ratio_min: f64,
    pub successor_ratio_max: f64,
    pub extraction: SubsequenceExtraction,
}

/// Runs the automatic construction and checks that the retained ratios approach 1.
pub fn extract_regular_subsequence(radii: &RadiiSequence) -> Result<RegularSubsequence> {
    let extraction = build_exceptional_union(radii, &F1Spec::Auto, None)?;
    Ok(regular_subsequence_from(radii, extraction))
}

/// Regularity evidence for the retained indices of an existing extraction.
pub fn regular_subsequence_from(radii: &RadiiSequence, extraction: SubsequenceExtraction) -> RegularSubsequence {
    let indices = extraction.retained.clone();
    let ratio_trace: Vec<f64> = indices.iter().map(|&n| radii.successor_ratio(n)).collect();
    let tail = ratio_trace.len().div_ceil(10);
    let diagnostic = ratio_trace[ratio_trace.len() - tail..]
        .iter()
        .map(|q| (q - 1.0).abs())
        .reduce(f64::max);
    let threshold = 1.0 / extraction.f2_final as f64;
    let success = diagnostic.is_some_and(|d| d < threshold);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in 1..radii.len() {
        let q = radii.successor_ratio(n);
        lo = lo.min(q);
        hi = hi.max(q);
    }
    RegularSubsequence {
        indices,
        ratio_trace,
        diagnostic,
        threshold,
        success,
        successor_ratio_min: lo,
        successor_ratio_max: hi,
        extraction,
    }
}

/// `max_m sup_{n>m} (r_n − r_{n+1})/(r_m − r_{m+1})` over the stored range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRatio {
    pub sup: f64,
    /// Where the supremum is attained.
    pub m: usize,
    pub n: usize,
    /// Whether the gaps `r_n − r_{n+1}` are non-increasing.
    pub gaps_monotone: bool,
}

pub fn gap_ratio_sup(radii: &RadiiSequence) -> Result<GapRatio> {
    let n_total = radii.len();
    if n_total < 3 {
        bail!(Parameter, "gap ratio needs N >= 3, got {n_total}");
    }
    // ln(r_n − r_{n+1}) = ln r_n + ln(1 − r_{n+1}/r_n)
    let ln_gap: Vec<f64> = (1..n_total)
        .map(|n| radii.ln_radius(n) + (-(-radii.ln_ratio(n)).exp_m1()).ln())
        .collect();
    let gaps_monotone = ln_gap.windows(2).all(|w| w[1] <= w[0]);
    let mut best = (f64::NEG_INFINITY, 0, 0);
    let mut suffix_max = (f64::NEG_INFINITY, 0usize);
    for i in (0..ln_gap.len()).rev() {
        if suffix_max.0 > f64::NEG_INFINITY {
            let v = suffix_max.0 - ln_gap[i];
            if v > best.0 {
                best = (v, i + 1, suffix_max.1 + 1);
            }
        }
        if ln_gap[i] >= suffix_max.0 {
            suffix_max = (ln_gap[i], i);
        }
    }
    Ok(GapRatio { sup: best.0.exp(), m: best.1, n: best.2, gaps_monotone })
}
