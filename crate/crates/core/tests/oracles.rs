// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Optimized routines against naive recomputations.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use spiralwind_core::directions::ssp_defect;
use spiralwind_core::profiles::{ArcLength, DecayProfile};
use spiralwind_core::radii::{build_exceptional_union, exceptional_sets, winding_radii, F1Spec};
use spiralwind_core::Point;

/// `ln a_n = −ln φ(2π(n−1))`, written out per family.
fn ln_a(profile: &DecayProfile, n: usize) -> f64 {
    let t = TAU * (n as f64 - 1.0);
    match *profile {
        DecayProfile::Exponential { a } => a * t,
        DecayProfile::PowerLaw { p } => p * (1.0 + t).ln(),
        DecayProfile::StretchedExp { beta, c } => c * t.powf(beta),
        DecayProfile::UserTable(_) => unreachable!(),
    }
}

fn naive_f1(profile: &DecayProfile, n_total: usize, m_max: usize) -> Vec<usize> {
    let mut f1 = vec![1];
    for m in 2..=m_max {
        let cube = (m * m * m) as f64;
        let n0 = (1..=n_total).find(|&s| (s..=n_total).all(|n| ln_a(profile, n) * cube <= n as f64));
        match n0 {
            Some(n0) => {
                let next = n0.max(f1[f1.len() - 1] + 1);
                if next > n_total {
                    break;
                }
                f1.push(next);
            }
            None => break,
        }
    }
    f1
}

fn stock() -> Vec<DecayProfile> {
    vec![
        DecayProfile::exponential(1.0).unwrap(),
        DecayProfile::power_law(1.0).unwrap(),
        DecayProfile::stretched_exp(0.5, 1.0).unwrap(),
    ]
}

#[test]
fn exceptional_sets_match_double_loop() {
    for profile in stock() {
        for n_total in [2, 3, 17, 100, 640, 1000] {
            let radii = winding_radii(&profile, n_total).unwrap();
            let m_max = 12;
            let sets = exceptional_sets(&radii, m_max).unwrap();
            for m in 1..=m_max {
                let naive: Vec<usize> = (1..n_total)
                    .filter(|&n| (ln_a(&profile, n + 1) - ln_a(&profile, n)).exp() >= 1.0 + 1.0 / m as f64)
                    .collect();
                assert_eq!(sets[m - 1], naive, "{profile} N={n_total} m={m}");
            }
        }
    }
}

#[test]
fn union_and_retained_match_double_loop() {
    for profile in stock() {
        for n_total in [100, 333, 1000] {
            let radii = winding_radii(&profile, n_total).unwrap();
            let ex = build_exceptional_union(&radii, &F1Spec::Auto, Some(8)).unwrap();
            let f1 = naive_f1(&profile, n_total, 8);
            assert_eq!(ex.f1, f1, "{profile} N={n_total}");
            let mut union = BTreeSet::new();
            for n in 1..n_total {
                let b = (ln_a(&profile, n + 1) - ln_a(&profile, n)).exp();
                for (i, &f) in f1.iter().enumerate() {
                    let m = i + 1;
                    if n >= f && b >= 1.0 + 1.0 / m as f64 {
                        union.insert(n);
                    }
                }
            }
            let retained: Vec<usize> = (1..n_total).filter(|n| !union.contains(n)).collect();
            assert_eq!(ex.union, union.into_iter().collect::<Vec<_>>(), "{profile} N={n_total}");
            assert_eq!(ex.retained, retained, "{profile} N={n_total}");
        }
    }
}

#[test]
fn arc_length_matches_dense_polyline() {
    for profile in stock() {
        let poly = profile.sample_spiral(2, 100_000).unwrap();
        let chord = poly.length();
        let quad = match profile.arc_length(0.0, 4.0 * PI, 1e-10).unwrap() {
            ArcLength::Finite { value, .. } => value,
            other => panic!("{other:?}"),
        };
        assert!(((quad - chord) / quad).abs() < 1e-4, "{profile}: {quad} vs {chord}");
        assert!(quad >= chord);
    }
}

#[test]
fn ssp_defect_scans() {
    // continuous minimum over the curve is 0.93509 at s ≈ 0.7224
    let exp = DecayProfile::exponential(1.0).unwrap();
    let cloud = exp.sample_spiral(20, 3600).unwrap().points;
    let t = (-PI).exp();
    let d = ssp_defect(&cloud, Point::ORIGIN, Point::new(1.0, 0.0), t).unwrap();
    assert!(d.reliable);
    assert!(d.delta > 0.9 && (d.delta - 0.935_088_409_533).abs() < 1e-4, "{}", d.delta);

    let pow = DecayProfile::power_law(1.0).unwrap();
    let cloud = pow.sample_spiral(120, 720).unwrap().points;
    let radii = winding_radii(&pow, 120).unwrap();
    let t = (radii.radius(100) * radii.radius(101)).sqrt();
    let d = ssp_defect(&cloud, Point::ORIGIN, Point::new(1.0, 0.0), t).unwrap();
    assert!(d.reliable);
    assert!(d.delta <= 0.031, "{}", d.delta);
}
