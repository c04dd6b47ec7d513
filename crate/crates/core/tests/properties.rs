// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use std::f64::consts::TAU;

use spiralwind_core::certificate::{winding_certificate, CertificateVariant};
use spiralwind_core::directions::{
    cone_membership, estimate_direction_set, is_unwinded, ssp_defect, ScaleSchedule,
};
use spiralwind_core::maps::{
    aa_limit, distortion_estimate, partition_length, probe_grid, rescaled_family, shear_spiral_map,
    AaOutcome, PlanarMap, Region,
};
use spiralwind_core::profiles::{ArcLength, DecayProfile};
use spiralwind_core::radii::{build_exceptional_union, winding_radii, F1Spec};
use spiralwind_core::Point;

fn profile() -> impl Strategy<Value = DecayProfile> {
    prop_oneof![
        (0.05f64..2.0).prop_map(|a| DecayProfile::exponential(a).unwrap()),
        (0.2f64..3.0).prop_map(|p| DecayProfile::power_law(p).unwrap()),
        (0.1f64..0.9, 0.2f64..2.0).prop_map(|(b, c)| DecayProfile::stretched_exp(b, c).unwrap()),
    ]
}

fn sub_exponential() -> impl Strategy<Value = DecayProfile> {
    prop_oneof![
        (0.2f64..3.0).prop_map(|p| DecayProfile::power_law(p).unwrap()),
        (0.1f64..0.9, 0.2f64..2.0).prop_map(|(b, c)| DecayProfile::stretched_exp(b, c).unwrap()),
    ]
}

fn finite(l: ArcLength) -> f64 {
    match l {
        ArcLength::Finite { value, .. } => value,
        other => panic!("{other:?}"),
    }
}

fn cloud(max_len: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((1e-3f64..1.0, 0.0f64..TAU), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(r, a)| Point::from_polar(r, a)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_is_decreasing(p in profile(), t1 in 0.0f64..40.0, dt in 1e-3f64..10.0) {
        prop_assert!(p.eval(t1).unwrap() > p.eval(t1 + dt).unwrap());
    }

    #[test]
    fn spiral_radius_matches_profile(p in profile(), t in 0.0f64..60.0) {
        let r = p.eval(t).unwrap();
        let z = p.spiral_point(t).unwrap();
        prop_assert!((z.norm() - r).abs() <= 4.0 * f64::EPSILON * r);
    }

    #[test]
    fn arc_length_is_additive(p in profile(), t0 in 0.0f64..20.0, d1 in 0.01f64..10.0, d2 in 0.01f64..10.0) {
        let tol = 1e-10;
        let (t1, t2) = (t0 + d1, t0 + d1 + d2);
        let a = finite(p.arc_length(t0, t1, tol).unwrap());
        let b = finite(p.arc_length(t1, t2, tol).unwrap());
        let c = finite(p.arc_length(t0, t2, tol).unwrap());
        prop_assert!((a + b - c).abs() <= 3.0 * tol);
    }

    #[test]
    fn arc_length_exceeds_chord(p in profile(), t0 in 0.0f64..20.0, d in 1e-3f64..15.0) {
        let l = finite(p.arc_length(t0, t0 + d, 1e-10).unwrap());
        let chord = p.spiral_point(t0 + d).unwrap().distance(p.spiral_point(t0).unwrap());
        prop_assert!(l >= chord - 1e-12);
    }

    #[test]
    fn exceptional_sets_nest_and_partition(p in profile(), n_total in 2usize..600) {
        let radii = winding_radii(&p, n_total).unwrap();
        let ex = build_exceptional_union(&radii, &F1Spec::Auto, Some(10)).unwrap();
        for w in ex.exceptional_sets.windows(2) {
            prop_assert!(w[0].iter().all(|n| w[1].binary_search(n).is_ok()));
        }
        let mut all: Vec<usize> = ex.union.iter().chain(&ex.retained).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..n_total).collect::<Vec<_>>());
        prop_assert!(ex.union.iter().all(|n| ex.retained.binary_search(n).is_err()));
        for (i, &f) in ex.f1.iter().enumerate() {
            let m = (i + 1) as f64;
            for &n in ex.retained.iter().filter(|&&n| n >= f) {
                prop_assert!(radii.ratio(n) < 1.0 + 1.0 / m);
            }
        }
    }

    #[test]
    fn halving_bins_adds_no_persistent_direction(pts in cloud(400), k in 0usize..4) {
        let sched = ScaleSchedule::dyadic(1.0, 1e-3).unwrap();
        let coarse = TAU / 36.0;
        let start = Some(k);
        let a = estimate_direction_set(&pts, Point::ORIGIN, &sched, coarse, start).unwrap();
        let b = estimate_direction_set(&pts, Point::ORIGIN, &sched, coarse / 2.0, start).unwrap();
        for &j in &b.persistent {
            prop_assert!(a.is_persistent(j / 2), "fine bin {} persistent, coarse {} not", j, j / 2);
        }
    }

    #[test]
    fn unwinded_matches_definition(pts in cloud(1000), k in 0usize..5) {
        let sched = ScaleSchedule::dyadic(1.0, 1e-3).unwrap();
        let w = TAU / 12.0;
        let ds = estimate_direction_set(&pts, Point::ORIGIN, &sched, w, Some(k)).unwrap();
        let s = sched.scales();
        let mut hit = vec![vec![false; 12]; s.len() - 1];
        for p in &pts {
            let r = p.norm();
            for layer in 0..s.len() - 1 {
                if r < s[layer] && r >= s[layer + 1] {
                    let bin = ((p.angle() / w) as usize).min(11);
                    hit[layer][bin] = true;
                }
            }
        }
        let populated: Vec<usize> = (k..s.len() - 1).filter(|&l| hit[l].iter().any(|&h| h)).collect();
        let missing = populated.is_empty() || (0..12).any(|b| !populated.iter().all(|&l| hit[l][b]));
        prop_assert_eq!(is_unwinded(&ds).unwrap().unwinded, missing);
    }

    #[test]
    fn ssp_defect_is_scale_invariant(pts in cloud(200), a in 0.0f64..TAU, t in 1e-3f64..1.0, lambda in 1e-3f64..1e3) {
        let u = Point::from_polar(1.0, a);
        let d1 = ssp_defect(&pts, Point::ORIGIN, u, t).unwrap();
        let scaled: Vec<Point> = pts.iter().map(|&p| p * lambda).collect();
        let d2 = ssp_defect(&scaled, Point::ORIGIN, u, t * lambda).unwrap();
        prop_assert!((d1.delta - d2.delta).abs() <= 1e-12 * (1.0 + d1.delta));
    }

    #[test]
    fn cone_is_scale_invariant(pts in cloud(300), a in 0.0f64..TAU, s in 1e-6f64..1e6, tol in 0.0f64..0.2) {
        let sched = ScaleSchedule::dyadic(1.0, 1e-3).unwrap();
        let ds = estimate_direction_set(&pts, Point::ORIGIN, &sched, TAU / 72.0, Some(0)).unwrap();
        let v = Point::from_polar(0.7, a);
        prop_assert_eq!(cone_membership(v, &ds, tol, None), cone_membership(v * s, &ds, tol, None));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn refining_partition_never_shortens(gamma in -3.0f64..3.0, mut ts in prop::collection::vec(0.01f64..2.0, 2..20), extra in 0.01f64..2.0) {
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        prop_assume!(ts.len() >= 2);
        let m = shear_spiral_map(gamma).unwrap();
        let before = partition_length(&m, &ts).unwrap().given;
        let mut finer = ts.clone();
        if !finer.contains(&extra) {
            finer.push(extra);
            finer.sort_by(f64::total_cmp);
        }
        let after = partition_length(&m, &finer).unwrap().given;
        prop_assert!(after >= before * (1.0 - 1e-14));
    }

    #[test]
    fn length_sandwich(gamma in -3.0f64..3.0, a in 1e-3f64..1.0, d in 1e-3f64..1.0) {
        let m = shear_spiral_map(gamma).unwrap();
        let l = m.declared_lipschitz().unwrap();
        let r = partition_length(&m, &[a, a + d]).unwrap();
        prop_assert!(r.refined >= d / l - 1e-6 && r.refined <= l * d + 1e-6);
    }

    #[test]
    fn shear_round_trip(gamma in -5.0f64..5.0, pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..500)) {
        let m = shear_spiral_map(gamma).unwrap();
        for (x, y) in pts {
            let p = Point::new(x, y);
            let back = m.apply_inverse(m.apply(p)).unwrap();
            prop_assert!(back.distance(p) < 1e-9);
        }
    }

    #[test]
    fn distortion_is_scale_invariant(gamma in -2.0f64..2.0, r in 1e-4f64..1.0, seed in 0u64..1000) {
        let base = shear_spiral_map(gamma).unwrap();
        let fam = rescaled_family(base.clone(), vec![r]).unwrap();
        let member = fam.member(0);
        prop_assert_eq!(member.declared_lipschitz(), base.declared_lipschitz());
        let a = distortion_estimate(&member, Region::Annulus { inner: 0.1, outer: 1.0 }, 1000, seed).unwrap();
        let b = distortion_estimate(&base, Region::Annulus { inner: 0.1 * r, outer: r }, 1000, seed).unwrap();
        prop_assert!((a.l_est / b.l_est - 1.0).abs() < 0.02);
    }

    #[test]
    fn limit_table_respects_lipschitz(gamma in -2.0f64..2.0, step in 0.01f64..1.0, tol in 0.01f64..0.5) {
        let scales: Vec<f64> = (1..=40).map(|n| (-(n as f64) * step).exp()).collect();
        let fam = rescaled_family(shear_spiral_map(gamma).unwrap(), scales).unwrap();
        if let AaOutcome::Converged(lim) = aa_limit(&fam, &probe_grid(5, 24), tol).unwrap() {
            prop_assert!(lim.modulus_ok(), "{} > {:?}", lim.modulus, lim.declared_lipschitz);
        }
    }

    #[test]
    fn exponential_certificate_is_constant(a in 0.05f64..3.0, n_total in 2usize..400) {
        let radii = winding_radii(&DecayProfile::exponential(a).unwrap(), n_total).unwrap();
        let cert = winding_certificate(&radii, CertificateVariant::PaperConstant, 1e-8).unwrap();
        let first = cert.l_min(1);
        prop_assert!(cert.bounds.iter().all(|b| (b.l_min - first).abs() <= 1e-12 * first));
    }

    #[test]
    fn arc_certificate_dominates(p in profile(), n_total in 2usize..60) {
        let radii = winding_radii(&p, n_total).unwrap();
        let paper = winding_certificate(&radii, CertificateVariant::PaperConstant, 1e-9).unwrap();
        let arc = winding_certificate(&radii, CertificateVariant::ArcLength, 1e-9).unwrap();
        for (x, y) in arc.bounds.iter().zip(&paper.bounds) {
            prop_assert!(x.l_min >= y.l_min);
        }
        for w in paper.bounds.windows(2) {
            prop_assert!(w[1].running_max >= w[0].running_max);
        }
    }

    #[test]
    fn certificate_restates_inequality(p in 0.2f64..3.0, n_total in 2usize..2000, l in 1.0f64..60.0) {
        let radii = winding_radii(&DecayProfile::power_law(p).unwrap(), n_total).unwrap();
        let cert = winding_certificate(&radii, CertificateVariant::PaperConstant, 1e-9).unwrap();
        for b in &cert.bounds {
            prop_assume!((l - b.l_min).abs() > 1e-9 * l);
            prop_assert_eq!(l >= b.l_min, l * b.gap >= b.r_next / l);
        }
    }

    #[test]
    fn certificate_on_retained_indices(p in sub_exponential()) {
        let radii = winding_radii(&p, 20_000).unwrap();
        let ex = build_exceptional_union(&radii, &F1Spec::Auto, None).unwrap();
        let cert = winding_certificate(&radii, CertificateVariant::PaperConstant, 1e-9).unwrap();
        for &n in &ex.retained {
            let q_minus_1 = (radii.ln_radius(n) - radii.ln_radius(n + 1)).exp_m1();
            let l2 = cert.l_min(n).powi(2);
            prop_assert!((l2 * q_minus_1 - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn retained_bounds_exceed_budget_for_stock_profiles() {
    for p in [DecayProfile::power_law(1.0).unwrap(), DecayProfile::stretched_exp(0.5, 1.0).unwrap()] {
        let radii = winding_radii(&p, 100_000).unwrap();
        let ex = build_exceptional_union(&radii, &F1Spec::Auto, Some(8)).unwrap();
        let cert = winding_certificate(&radii, CertificateVariant::PaperConstant, 1e-9).unwrap();
        let last = *ex.retained.last().unwrap();
        assert!(cert.l_min(last) > 10.0, "{p}: {}", cert.l_min(last));
    }
}
