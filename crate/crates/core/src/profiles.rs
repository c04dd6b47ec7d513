// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Decay profiles `φ: [0, ∞) → (0, 1]` and the spirals `C_φ(t) = φ(t)·e^{it}` they generate.

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::math::FloatFuncs;
use crate::quadrature::{self, Integral};
use crate::{Point, TAU};

/// Default cap on the number of points [`DecayProfile::sample_spiral`] may produce.
pub const DEFAULT_POINT_CAP: usize = 1 << 26;

/// A strictly decreasing table `(t_i, φ_i)` starting at `t = 0`, interpolated by a
/// monotone (PCHIP) cubic so that monotonicity of the data carries over.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    t: Vec<f64>,
    phi: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneTable {
    pub fn new(t: Vec<f64>, phi: Vec<f64>) -> Result<MonotoneTable> {
        if t.len() != phi.len() {
            bail!(Validation, "table columns differ in length ({} vs {})", t.len(), phi.len());
        }
        if t.len() < 2 {
            bail!(Validation, "table needs at least two rows");
        }
        if t[0] != 0.0 {
            bail!(Validation, "table must start at t = 0, got t = {}", t[0]);
        }
        for i in 0..t.len() {
            if !(t[i].is_finite() && phi[i].is_finite()) {
                bail!(Validation, "non-finite table entry at row {}", i + 1);
            }
            if !(phi[i] > 0.0 && phi[i] <= 1.0) {
                bail!(Validation, "phi must lie in (0, 1], got {} at row {}", phi[i], i + 1);
            }
            if i > 0 && !(t[i] > t[i - 1]) {
                bail!(Validation, "t must be strictly increasing (row {})", i + 1);
            }
            if i > 0 && !(phi[i] < phi[i - 1]) {
                bail!(Validation, "phi must be strictly decreasing (row {})", i + 1);
            }
        }
        let slope = pchip_slopes(&t, &phi);
        Ok(MonotoneTable { t, phi, slope })
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn t_max(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    fn locate(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t <= self.t_max()) {
            bail!(Range, "t = {t} outside the table range [0, {}]", self.t_max());
        }
        // index i with t_i ≤ t ≤ t_{i+1}
        let i = self.t.partition_point(|&ti| ti <= t);
        Ok(i.saturating_sub(1).min(self.t.len() - 2))
    }

    fn eval(&self, t: f64) -> Result<f64> {
        let i = self.locate(t)?;
        let h = self.t[i + 1] - self.t[i];
        let s = (t - self.t[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Ok(h00 * self.phi[i] + h10 * h * self.slope[i] + h01 * self.phi[i + 1] + h11 * h * self.slope[i + 1])
    }

    /// Central difference of the interpolant (one-sided at the ends of the table).
    fn derivative(&self, t: f64) -> Result<f64> {
        let h = 1e-6 * t.abs().max(1.0);
        let lo = (t - h).max(0.0);
        let hi = (t + h).min(self.t_max());
        Ok((self.eval(hi)? - self.eval(lo)?) / (hi - lo))
    }
}

/// Fritsch–Butland weighted harmonic mean slopes; strictly negative for strictly
/// decreasing data, with the usual three-point end conditions clamped to keep sign.
fn pchip_slopes(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = alloc::vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for k in 1..n - 1 {
        let w1 = 2.0 * h[k] + h[k - 1];
        let w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// A monotone decay profile.
#[derive(Debug, Clone, PartialEq)]
pub enum DecayProfile {
    /// `φ(t) = e^{−a t}`: the logarithmic spiral.
    Exponential { a: f64 },
    /// `φ(t) = (1 + t)^{−p}`.
    PowerLaw { p: f64 },
    /// `φ(t) = e^{−c t^β}`, `0 < β < 1`.
    StretchedExp { beta: f64, c: f64 },
    /// Sampled values with monotone cubic interpolation.
    UserTable(MonotoneTable),
}

/// Arc length verdict for a stretch of spiral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcLength {
    /// The length, with an absolute error bound (quadrature plus truncated tail).
    Finite { value: f64, error: f64 },
    /// Only a lower bound is available (a tabulated profile has no tail model).
    LowerBound { value: f64 },
    /// The integrand dominates a non-integrable function: the length is infinite.
    Infinite,
}

impl ArcLength {
    pub fn value(&self) -> Option<f64> {
        match *self {
            ArcLength::Finite { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Short identifier in the `exp:a=…` / `pow:p=…` / `sexp:beta=…,c=…` grammar;
/// tables print their row count.
impl core::fmt::Display for DecayProfile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DecayProfile::Exponential { a } => write!(f, "exp:a={a}"),
            DecayProfile::PowerLaw { p } => write!(f, "pow:p={p}"),
            DecayProfile::StretchedExp { beta, c } => write!(f, "sexp:beta={beta},c={c}"),
            DecayProfile::UserTable(tab) => write!(f, "table:{}-rows", tab.t().len()),
        }
    }
}

/// Variable used to integrate the length element of one profile family.
///
/// `to_var`/`to_t` are inverse bijections of `[0, ∞)`, and `ln_density(v)` is the
/// log of `√(φ'² + φ²)·dt/dv`.
trait LengthChart {
    fn to_var(&self, t: f64) -> f64;
    fn ln_density(&self, v: f64) -> f64;
}

struct ExpChart {
    a: f64,
}
impl LengthChart for ExpChart {
    fn to_var(&self, t: f64) -> f64 {
        t
    }
    fn ln_density(&self, v: f64) -> f64 {
        -self.a * v + 0.5 * (self.a * self.a).ln_1p()
    }
}

// v = ln(1 + t)
struct PowChart {
    p: f64,
}
impl LengthChart for PowChart {
    fn to_var(&self, t: f64) -> f64 {
        t.ln_1p()
    }
    fn ln_density(&self, v: f64) -> f64 {
        let p = self.p;
        (1.0 - p) * v + 0.5 * (p * p * (-2.0 * v).exp()).ln_1p()
    }
}

// v = t^β; the t^{β−1} singularity of φ' at t = 0 cancels against dt/dv.
struct StretchedChart {
    beta: f64,
    c: f64,
}
impl LengthChart for StretchedChart {
    fn to_var(&self, t: f64) -> f64 {
        t.powf(self.beta)
    }
    fn ln_density(&self, v: f64) -> f64 {
        let (b, c) = (self.beta, self.c);
        let w = if v > 0.0 { v.powf(1.0 / b - 1.0) / b } else { 0.0 };
        -c * v + 0.5 * (c * c + w * w).ln()
    }
}

impl DecayProfile {
    pub fn exponential(a: f64) -> Result<DecayProfile> {
        let p = DecayProfile::Exponential { a };
        p.validate()?;
        Ok(p)
    }

    pub fn power_law(p: f64) -> Result<DecayProfile> {
        let prof = DecayProfile::PowerLaw { p };
        prof.validate()?;
        Ok(prof)
    }

    pub fn stretched_exp(beta: f64, c: f64) -> Result<DecayProfile> {
        let p = DecayProfile::StretchedExp { beta, c };
        p.validate()?;
        Ok(p)
    }

    pub fn table(t: Vec<f64>, phi: Vec<f64>) -> Result<DecayProfile> {
        Ok(DecayProfile::UserTable(MonotoneTable::new(t, phi)?))
    }

    /// Checks the family parameters.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DecayProfile::Exponential { a } if !(a > 0.0 && a.is_finite()) => {
                bail!(Parameter, "a must be > 0, got {a}")
            }
            DecayProfile::PowerLaw { p } if !(p > 0.0 && p.is_finite()) => {
                bail!(Parameter, "p must be > 0, got {p}")
            }
            DecayProfile::StretchedExp { beta, .. } if !(beta > 0.0 && beta < 1.0) => {
                bail!(Parameter, "beta must lie in (0, 1), got {beta}")
            }
            DecayProfile::StretchedExp { c, .. } if !(c > 0.0 && c.is_finite()) => {
                bail!(Parameter, "c must be > 0, got {c}")
            }
            _ => Ok(()),
        }
    }

    fn check_t(t: f64) -> Result<()> {
        if !(t >= 0.0) || t.is_nan() {
            bail!(Parameter, "t must be >= 0, got {t}");
        }
        Ok(())
    }

    /// `φ(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_t(t)?;
        Ok(match self {
            DecayProfile::Exponential { a } => (-a * t).exp(),
            DecayProfile::PowerLaw { p } => (-p * t.ln_1p()).exp(),
            DecayProfile::StretchedExp { beta, c } => (-c * t.powf(*beta)).exp(),
            DecayProfile::UserTable(tab) => tab.eval(t)?,
        })
    }

    /// `ln φ(t)`, finite even where `φ(t)` underflows.
    pub fn ln_eval(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_t(t)?;
        Ok(match self {
            DecayProfile::Exponential { a } => -a * t,
            DecayProfile::PowerLaw { p } => -p * t.ln_1p(),
            DecayProfile::StretchedExp { beta, c } => -c * t.powf(*beta),
            DecayProfile::UserTable(tab) => tab.eval(t)?.ln(),
        })
    }

    /// `φ'(t)`: closed form for the named families, central differences for tables.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_t(t)?;
        Ok(match self {
            DecayProfile::Exponential { a } => -a * (-a * t).exp(),
            DecayProfile::PowerLaw { p } => -p * (-(p + 1.0) * t.ln_1p()).exp(),
            DecayProfile::StretchedExp { beta, c } => {
                if t == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -c * beta * t.powf(beta - 1.0) * (-c * t.powf(*beta)).exp()
                }
            }
            DecayProfile::UserTable(tab) => tab.derivative(t)?,
        })
    }

    /// A time `T(ε)` with `φ(T) < ε`, or `None` when a table never gets that small.
    pub fn time_below(&self, eps: f64) -> Result<Option<f64>> {
        self.validate()?;
        if !(eps > 0.0) {
            bail!(Parameter, "eps must be > 0, got {eps}");
        }
        if eps > 1.0 {
            return Ok(Some(0.0).filter(|_| self.eval(0.0).is_ok_and(|v| v < eps)));
        }
        let t = match self {
            DecayProfile::Exponential { a } => -eps.ln() / a,
            DecayProfile::PowerLaw { p } => (-eps.ln() / p).exp_m1(),
            DecayProfile::StretchedExp { beta, c } => (-eps.ln() / c).powf(1.0 / beta),
            DecayProfile::UserTable(tab) => {
                return Ok(tab
                    .phi
                    .iter()
                    .position(|&v| v < eps)
                    .map(|i| tab.t[i]));
            }
        };
        // step past the crossing so the inequality is strict in floating point
        let mut t = t * (1.0 + 1e-12) + 1e-300;
        while self.eval(t)? >= eps {
            t = t * 1.000_001 + 1e-12;
        }
        Ok(Some(t))
    }

    /// `C_φ(t) = (φ(t) cos t, φ(t) sin t)`.
    pub fn spiral_point(&self, t: f64) -> Result<Point> {
        Ok(Point::from_polar(self.eval(t)?, t))
    }

    /// Samples `windings` full turns at `per_winding` uniformly spaced angles per turn.
    pub fn sample_spiral(&self, windings: usize, per_winding: usize) -> Result<SpiralPolyline> {
        self.sample_spiral_with_cap(windings, per_winding, DEFAULT_POINT_CAP)
    }

    pub fn sample_spiral_with_cap(
        &self,
        windings: usize,
        per_winding: usize,
        cap: usize,
    ) -> Result<SpiralPolyline> {
        if windings < 1 {
            bail!(Parameter, "windings must be >= 1");
        }
        if per_winding < 3 {
            bail!(Parameter, "per_winding must be >= 3, got {per_winding}");
        }
        let steps = windings
            .checked_mul(per_winding)
            .filter(|&s| s <= cap)
            .ok_or_else(|| {
                Error::Resource(alloc::format!(
                    "{windings} windings x {per_winding} points exceeds the point budget {cap}"
                ))
            })?;
        let mut t = Vec::with_capacity(steps + 1);
        let mut points = Vec::with_capacity(steps + 1);
        for j in 0..=steps {
            let tj = TAU * j as f64 / per_winding as f64;
            t.push(tj);
            points.push(self.spiral_point(tj)?);
        }
        Ok(SpiralPolyline { t, points, origin: Point::ORIGIN })
    }

    fn chart(&self) -> Option<alloc::boxed::Box<dyn LengthChart>> {
        use alloc::boxed::Box;
        match *self {
            DecayProfile::Exponential { a } => Some(Box::new(ExpChart { a })),
            DecayProfile::PowerLaw { p } => Some(Box::new(PowChart { p })),
            DecayProfile::StretchedExp { beta, c } => Some(Box::new(StretchedChart { beta, c })),
            DecayProfile::UserTable(_) => None,
        }
    }

    /// `∫_{t0}^{t1} √(φ'² + φ²) dt · e^{−shift}` over a finite interval.
    fn length_integral(&self, t0: f64, t1: f64, tol: f64, shift: f64) -> Result<Integral> {
        match self.chart() {
            Some(chart) => {
                let (v0, v1) = (chart.to_var(t0), chart.to_var(t1));
                quadrature::integrate(|v| (chart.ln_density(v) - shift).exp(), v0, v1, tol)
            }
            None => {
                let f = |t: f64| {
                    let phi = self.eval(t).unwrap_or(f64::NAN);
                    let d = self.derivative(t).unwrap_or(f64::NAN);
                    d.hypot(phi) * (-shift).exp()
                };
                quadrature::integrate(f, t0, t1, tol)
            }
        }
    }

    /// Length of `C_φ` restricted to `[t0, t1]`; `t1` may be `f64::INFINITY`.
    pub fn arc_length(&self, t0: f64, t1: f64, tol: f64) -> Result<ArcLength> {
        self.validate()?;
        Self::check_t(t0)?;
        if !(tol > 0.0) {
            bail!(Parameter, "tol must be > 0, got {tol}");
        }
        if !(t1 > t0) {
            bail!(Parameter, "need t0 < t1, got [{t0}, {t1}]");
        }
        if t1.is_finite() {
            if let DecayProfile::UserTable(tab) = self {
                if t1 > tab.t_max() {
                    bail!(Range, "t1 = {t1} beyond the table range {}", tab.t_max());
                }
            }
            let r = self.length_integral(t0, t1, tol, 0.0)?;
            return Ok(ArcLength::Finite { value: r.value, error: r.error });
        }
        match *self {
            DecayProfile::Exponential { a } => {
                // tail from T is exactly √(1+a²)·e^{−aT}/a
                let big_t = t0.max((tol / 2.0).ln() / -a).max(t0 + 1.0);
                let body = self.length_integral(t0, big_t, tol / 2.0, 0.0)?;
                let tail = (1.0 + a * a).sqrt() * (-a * big_t).exp() / a;
                Ok(ArcLength::Finite { value: body.value + tail, error: body.error })
            }
            DecayProfile::PowerLaw { p } => {
                if p <= 1.0 {
                    // √(φ'² + φ²) ≥ (1 + t)^{−p}, not integrable for p ≤ 1
                    return Ok(ArcLength::Infinite);
                }
                // in v = ln(1+t) the tail from V lies in
                // [e^{(1−p)V}/(p−1), e^{(1−p)V}/(p−1) + e^{−pV}]
                let v0 = t0.ln_1p();
                let mut v_end = v0 + 1.0;
                while (-p * v_end).exp() > tol / 2.0 {
                    v_end += 1.0;
                }
                let body = quadrature::integrate(
                    |v| PowChart { p }.ln_density(v).exp(),
                    v0,
                    v_end,
                    tol / 2.0,
                )?;
                let tail_lo = ((1.0 - p) * v_end).exp() / (p - 1.0);
                let slack = (-p * v_end).exp();
                Ok(ArcLength::Finite { value: body.value + tail_lo, error: body.error + slack })
            }
            DecayProfile::StretchedExp { beta, c } => {
                // in v = t^β the density e^{−cv}√(c² + w²) with w = v^k/β, k = 1/β − 1,
                // has tail from V in [e^{−cV}, e^{−cV} + (2/(cβ))V^k e^{−cV}] once V ≥ 2k/c
                let k = 1.0 / beta - 1.0;
                let v0 = t0.powf(beta);
                let mut v_end = (v0 + 1.0).max(2.0 * k / c);
                let slack_at = |v: f64| 2.0 / (c * beta) * v.powf(k) * (-c * v).exp();
                while slack_at(v_end) > tol / 2.0 {
                    v_end *= 1.25;
                }
                let chart = StretchedChart { beta, c };
                let body = quadrature::integrate(|v| chart.ln_density(v).exp(), v0, v_end, tol / 2.0)?;
                let tail_lo = (-c * v_end).exp();
                Ok(ArcLength::Finite {
                    value: body.value + tail_lo,
                    error: body.error + slack_at(v_end),
                })
            }
            DecayProfile::UserTable(ref tab) => {
                if t0 >= tab.t_max() {
                    bail!(Range, "t0 = {t0} at or beyond the table range {}", tab.t_max());
                }
                let r = self.length_integral(t0, tab.t_max(), tol, 0.0)?;
                Ok(ArcLength::LowerBound { value: r.value })
            }
        }
    }

    /// Length of `C_φ` on the finite interval `[t0, t1]` divided by `φ(t0)`.
    ///
    /// Computed in log space, so it stays accurate deep inside the spiral where
    /// `φ` itself underflows. `tol` is absolute on the normalized length.
    pub fn relative_arc_length(&self, t0: f64, t1: f64, tol: f64) -> Result<f64> {
        self.validate()?;
        Self::check_t(t0)?;
        if !(tol > 0.0) {
            bail!(Parameter, "tol must be > 0, got {tol}");
        }
        if !(t1 > t0 && t1.is_finite()) {
            bail!(Parameter, "need finite t0 < t1, got [{t0}, {t1}]");
        }
        let shift = self.ln_eval(t0)?;
        Ok(self.length_integral(t0, t1, tol, shift)?.value)
    }
}

/// Sampled spiral with the marked origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralPolyline {
    pub t: Vec<f64>,
    pub points: Vec<Point>,
    pub origin: Point,
}

impl SpiralPolyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of segment lengths.
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    // Reference values: 30-digit evaluation of the closed forms.
    const E_M2PI: f64 = 0.001_867_442_731_707_988_8;
    const INV_1P2PI: f64 = 0.137_302_561_698_412_97;
    const E_M4PI: f64 = 3.487_342_356_208_995_5e-6;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eval_examples() {
        let e = DecayProfile::exponential(1.0).unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
        assert!(close(e.eval(TAU).unwrap(), E_M2PI, 1e-17));
        let p = DecayProfile::power_law(1.0).unwrap();
        assert!(close(p.eval(TAU).unwrap(), INV_1P2PI, 1e-16));
    }

    #[test]
    fn spiral_point_examples() {
        let e = DecayProfile::exponential(1.0).unwrap();
        let q = e.spiral_point(TAU).unwrap();
        assert!(close(q.x, E_M2PI, 1e-17) && q.y.abs() < 1e-18);
        let p = DecayProfile::power_law(1.0).unwrap();
        let q = p.spiral_point(core::f64::consts::PI).unwrap();
        assert!(close(q.x, -0.241_453_007_005_223_85, 1e-15), "{q:?}");
        assert!(q.y.abs() < 1e-16);
        let s = DecayProfile::stretched_exp(0.5, 1.0).unwrap();
        assert_eq!(s.spiral_point(0.0).unwrap(), Point::new(1.0, 0.0));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(DecayProfile::exponential(0.0), Err(Error::Parameter(_))));
        assert!(matches!(DecayProfile::power_law(-1.0), Err(Error::Parameter(_))));
        assert!(matches!(DecayProfile::stretched_exp(1.0, 1.0), Err(Error::Parameter(_))));
        assert!(matches!(DecayProfile::stretched_exp(0.5, 0.0), Err(Error::Parameter(_))));
        let e = DecayProfile::exponential(1.0).unwrap();
        assert!(e.eval(-1.0).is_err());
        assert!(e.eval(f64::NAN).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            DecayProfile::table(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.6]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            DecayProfile::table(vec![0.0, 1.0, 1.0], vec![1.0, 0.5, 0.4]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            DecayProfile::table(vec![0.5, 1.0], vec![1.0, 0.5]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            DecayProfile::table(vec![0.0, 1.0], vec![1.5, 0.5]),
            Err(Error::Validation(_))
        ));
        let tab = DecayProfile::table(vec![0.0, 1.0, 3.0], vec![1.0, 0.5, 0.1]).unwrap();
        assert!(matches!(tab.eval(3.5), Err(Error::Range(_))));
    }

    #[test]
    fn table_interpolates_knots_and_stays_monotone() {
        let t: Vec<f64> = (0..20).map(|i| i as f64 * 0.7).collect();
        let phi: Vec<f64> = t.iter().map(|&x| 1.0 / (1.0 + x * x)).collect();
        let tab = DecayProfile::table(t.clone(), phi.clone()).unwrap();
        for (ti, pi) in t.iter().zip(&phi) {
            assert!(close(tab.eval(*ti).unwrap(), *pi, 1e-15));
        }
        let tab_end = t[19];
        let mut prev = f64::INFINITY;
        for j in 0..=5000 {
            let v = tab.eval((tab_end * j as f64 / 5000.0).min(tab_end)).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn sample_spiral_examples() {
        let p = DecayProfile::power_law(1.0).unwrap();
        let s = p.sample_spiral(1, 4).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.points[0], Point::new(1.0, 0.0));
        let radii: Vec<f64> = s.points.iter().map(|q| q.norm()).collect();
        assert!(radii.windows(2).all(|w| w[1] < w[0]));

        let e = DecayProfile::exponential(1.0).unwrap();
        let s = e.sample_spiral(2, 360).unwrap();
        assert_eq!(s.len(), 721);
        let last = s.points[720].norm();
        assert!(close(last, E_M4PI, 1e-18), "{last}");

        let st = DecayProfile::stretched_exp(0.5, 1.0).unwrap();
        let s = st.sample_spiral(1, 8).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.points[0], Point::new(1.0, 0.0));
    }

    #[test]
    fn sample_spiral_budget_and_parameters() {
        let p = DecayProfile::power_law(1.0).unwrap();
        assert!(matches!(p.sample_spiral_with_cap(10, 10, 99), Err(Error::Resource(_))));
        assert!(p.sample_spiral_with_cap(10, 10, 100).is_ok());
        assert!(matches!(p.sample_spiral(0, 10), Err(Error::Parameter(_))));
        assert!(matches!(p.sample_spiral(1, 2), Err(Error::Parameter(_))));
        assert!(matches!(p.sample_spiral(usize::MAX, 4), Err(Error::Resource(_))));
    }

    #[test]
    fn time_below_crosses() {
        for prof in [
            DecayProfile::exponential(0.3).unwrap(),
            DecayProfile::power_law(2.0).unwrap(),
            DecayProfile::stretched_exp(0.5, 1.0).unwrap(),
        ] {
            for eps in [0.9, 1e-3, 1e-12] {
                let t = prof.time_below(eps).unwrap().unwrap();
                assert!(prof.eval(t).unwrap() < eps);
            }
        }
        let tab = DecayProfile::table(vec![0.0, 1.0], vec![1.0, 0.5]).unwrap();
        assert_eq!(tab.time_below(0.1).unwrap(), None);
        assert_eq!(tab.time_below(0.7).unwrap(), Some(1.0));
    }

    #[test]
    fn arc_length_examples() {
        let e = DecayProfile::exponential(1.0).unwrap();
        let l = e.arc_length(0.0, f64::INFINITY, 1e-10).unwrap();
        assert!(close(l.value().unwrap(), core::f64::consts::SQRT_2, 1e-10), "{l:?}");

        let p = DecayProfile::power_law(1.0).unwrap();
        assert_eq!(p.arc_length(0.0, f64::INFINITY, 1e-6).unwrap(), ArcLength::Infinite);
        assert!(p.arc_length(5.0, 5.0, 1e-6).is_err());
        let tiny = p.arc_length(5.0, 5.0 + 1e-9, 1e-12).unwrap().value().unwrap();
        assert!(tiny < 1e-9);
        assert!(matches!(p.arc_length(0.0, 1.0, 0.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn arc_length_closed_forms() {
        // e^{−at}: length on [0, T] = √(1+a²)(1 − e^{−aT})/a
        let a = 0.2;
        let e = DecayProfile::exponential(a).unwrap();
        let l = e.arc_length(0.0, 10.0, 1e-12).unwrap().value().unwrap();
        let exact = (1.0 + a * a).sqrt() * (1.0 - (-a * 10.0).exp()) / a;
        assert!(close(l, exact, 1e-11));
        // infinite tail at small a
        let l = e.arc_length(0.0, f64::INFINITY, 1e-9).unwrap().value().unwrap();
        assert!(close(l, (1.0 + a * a).sqrt() / a, 1e-9), "{l}");
    }

    #[test]
    fn power_law_tail_converges_for_p_above_one() {
        let p = DecayProfile::power_law(2.0).unwrap();
        let inf = p.arc_length(0.0, f64::INFINITY, 1e-8).unwrap();
        let ArcLength::Finite { value, error } = inf else { panic!() };
        assert!(error <= 1e-8);
        // ∫ (1+t)^{-2} dt = 1 is a lower bound; the derivative term adds a little
        assert!(value > 1.0 && value < 1.5);
        let finite = p.arc_length(0.0, 1e6, 1e-9).unwrap().value().unwrap();
        assert!(value - finite > 0.0 && value - finite < 2e-6);
    }

    #[test]
    fn stretched_exp_length_handles_origin_singularity() {
        let s = DecayProfile::stretched_exp(0.5, 1.0).unwrap();
        let a = s.arc_length(0.0, 1.0, 1e-10).unwrap().value().unwrap();
        let b = s.arc_length(1.0, f64::INFINITY, 1e-10).unwrap().value().unwrap();
        let all = s.arc_length(0.0, f64::INFINITY, 1e-10).unwrap().value().unwrap();
        assert!(close(a + b, all, 3e-10), "{} vs {all}", a + b);
    }

    #[test]
    fn table_infinite_length_is_lower_bound() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 0.5).collect();
        let phi: Vec<f64> = t.iter().map(|&x| (-0.5 * x).exp()).collect();
        let tab = DecayProfile::table(t, phi).unwrap();
        let l = tab.arc_length(0.0, f64::INFINITY, 1e-6).unwrap();
        let ArcLength::LowerBound { value } = l else { panic!("{l:?}") };
        let exact = (1.25f64).sqrt() / 0.5 * (1.0 - (-0.5 * 24.5f64).exp());
        assert!(close(value, exact, 1e-3), "{value} vs {exact}");
    }

    #[test]
    fn relative_length_survives_underflow() {
        let e = DecayProfile::exponential(1.0).unwrap();
        let t0 = TAU * 200.0;
        let rel = e.relative_arc_length(t0, t0 + TAU, 1e-12).unwrap();
        let exact = core::f64::consts::SQRT_2 * (1.0 - E_M2PI);
        assert!(close(rel, exact, 1e-11), "{rel}");
    }
}
