// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-winding lower bounds on the bi-Lipschitz constant of any map taking a
//! spiral onto a straight segment.
//!
//! If `h` is `L`-bi-Lipschitz and flattens the spiral, the winding `Γ'_n` between
//! radii `r_n` and `r_{n+1}` and the radial gap `I_n = [r_{n+1}, r_n]` have
//! images with `L·|I_n| ≥ 𝓛(h(I_n)) ≥ |h(Γ'_n)| ≥ |Γ'_n|/L`, so
//! `L² ≥ |Γ'_n| / (r_n − r_{n+1})`. Only segment targets are covered; general
//! unwinded curves are out of reach of this argument.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::FloatFuncs;
use crate::radii::RadiiSequence;
use crate::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateVariant {
    /// Winding length bounded below by `r_{n+1}`.
    PaperConstant,
    /// Winding length from quadrature of the profile.
    ArcLength,
}

impl CertificateVariant {
    pub fn name(self) -> &'static str {
        match self {
            CertificateVariant::PaperConstant => "paper",
            CertificateVariant::ArcLength => "arc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingBound {
    pub n: usize,
    pub r_n: f64,
    pub r_next: f64,
    /// `|I_n| = r_n − r_{n+1}`.
    pub gap: f64,
    /// Lower bound used for the winding length `|Γ'_n|`.
    pub winding_lower_bound: f64,
    pub l_min: f64,
    pub running_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub profile: String,
    pub variant: CertificateVariant,
    /// Absolute tolerance on the normalized winding length, arc variant only.
    pub quad_tol: Option<f64>,
    /// Bounds for `n = 1..N−1`.
    pub bounds: Vec<WindingBound>,
}

impl Certificate {
    pub fn l_min(&self, n: usize) -> f64 {
        self.bounds[n - 1].l_min
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }
}

pub fn winding_certificate(
    radii: &RadiiSequence,
    variant: CertificateVariant,
    quad_tol: f64,
) -> Result<Certificate> {
    if radii.len() < 2 {
        bail!(Precondition, "a certificate needs at least 2 radii, got {}", radii.len());
    }
    let source = match variant {
        CertificateVariant::ArcLength => match radii.source() {
            Some(p) => {
                if !(quad_tol > 0.0) {
                    bail!(Parameter, "quadrature tolerance must be > 0, got {quad_tol}");
                }
                Some(p)
            }
            None => bail!(Precondition, "the arc-length variant needs radii generated by a profile"),
        },
        CertificateVariant::PaperConstant => None,
    };
    let mut bounds = Vec::with_capacity(radii.len() - 1);
    let mut running_max: f64 = 0.0;
    for n in 1..radii.len() {
        // Δ = ln(r_{n+1}/r_n) < 0; everything is scaled by r_n to survive underflow.
        let delta = radii.ln_radius(n + 1) - radii.ln_radius(n);
        let rel_gap = -delta.exp_m1();
        let rel_winding = match source {
            Some(p) => {
                let t0 = TAU * (n - 1) as f64;
                p.relative_arc_length(t0, t0 + TAU, quad_tol)?
            }
            None => delta.exp(),
        };
        let l_min = (rel_winding / rel_gap).sqrt();
        running_max = running_max.max(l_min);
        let r_n = radii.radius(n);
        bounds.push(WindingBound {
            n,
            r_n,
            r_next: radii.radius(n + 1),
            gap: r_n * rel_gap,
            winding_lower_bound: r_n * rel_winding,
            l_min,
            running_max,
        });
    }
    Ok(Certificate {
        profile: radii.source().map_or_else(|| "data".to_string(), |p| p.to_string()),
        variant,
        quad_tol: source.map(|_| quad_tol),
        bounds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refutation {
    RefutedAtIndex(usize),
    NotRefutedWithin(usize),
}

/// The violated inequality `L·|I_n| ≥ |Γ'_n|/L` at the refuting index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefutationChain {
    pub gap: f64,
    pub winding_lower_bound: f64,
    /// `L·|I_n|`.
    pub stretched_gap: f64,
    /// `|Γ'_n|/L`.
    pub compressed_winding: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefutationReport {
    pub variant: CertificateVariant,
    pub l_claimed: f64,
    pub verdict: Refutation,
    pub chain: Option<RefutationChain>,
}

impl RefutationReport {
    pub fn n_star(&self) -> Option<usize> {
        match self.verdict {
            Refutation::RefutedAtIndex(n) => Some(n),
            Refutation::NotRefutedWithin(_) => None,
        }
    }
}

/// First winding whose bound exceeds `l_claimed`.
pub fn refute_unwinding(cert: &Certificate, l_claimed: f64) -> Result<RefutationReport> {
    if !(l_claimed >= 1.0) {
        bail!(Parameter, "claimed constant must be >= 1, got {l_claimed}");
    }
    let hit = cert.bounds.iter().find(|b| b.l_min > l_claimed);
    Ok(RefutationReport {
        variant: cert.variant,
        l_claimed,
        verdict: match hit {
            Some(b) => Refutation::RefutedAtIndex(b.n),
            None => Refutation::NotRefutedWithin(cert.bounds.len() + 1),
        },
        chain: hit.map(|b| RefutationChain {
            gap: b.gap,
            winding_lower_bound: b.winding_lower_bound,
            stretched_gap: l_claimed * b.gap,
            compressed_winding: b.winding_lower_bound / l_claimed,
        }),
    })
}
