// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use spiralwind_core::certificate::{refute_unwinding, winding_certificate, CertificateVariant, Refutation};
use spiralwind_core::directions::{
    direction_grid, estimate_direction_set, is_unwinded, tilde_ssp_check, ScaleSchedule,
};
use spiralwind_core::maps::{
    distortion_estimate, partition_length, shear_spiral_map, transported_direction_check, MapExpr,
    PlanarMap, Region,
};
use spiralwind_core::profiles::DecayProfile;
use spiralwind_core::radii::{
    build_exceptional_union, extract_regular_subsequence, regular_subsequence_from, subexp_classify,
    verify_claim_bounds, winding_radii, DecayVerdict, F1Spec,
};
use spiralwind_core::Point;

const GOLDEN: f64 = 1.618_033_988_749_895;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Collects named sub-checks.
#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn finish(self, elapsed: Duration, limit: Option<Duration>) -> Outcome {
        let mut checks = self.0;
        if let Some(limit) = limit {
            checks.push((format!("runtime {:.2}s < {}s", elapsed.as_secs_f64(), limit.as_secs()), elapsed < limit));
        }
        let pass = checks.iter().all(|c| c.1);
        let detail = checks
            .iter()
            .map(|(n, ok)| format!("{}{n}", if *ok { "" } else { "FAILED " }))
            .collect::<Vec<_>>()
            .join("; ");
        Outcome { pass, detail }
    }
}

fn lemma_construction(profile: DecayProfile) -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let radii = winding_radii(&profile, 100_000).unwrap();
    let ex = build_exceptional_union(&radii, &F1Spec::Auto, Some(8)).unwrap();
    let claims = verify_claim_bounds(&ex).unwrap();
    for (m, level) in claims.per_level.iter().enumerate() {
        c.check(format!("claim1 m={} n0={:?}", m + 1, level.n0), level.holds_eventually());
    }
    let last = claims.union.rows.last().unwrap();
    c.check(format!("claim2 {} <= {:.1}", last.count, last.bound), last.holds);
    let density = ex.union.len() as f64 / ex.n as f64;
    c.check(format!("density {density:.5} < 0.05"), density < 0.05);
    let sub = regular_subsequence_from(&radii, ex);
    let diag = sub.diagnostic.unwrap_or(f64::INFINITY);
    c.check(format!("tail ratio |r_(n+1)/r_n - 1| = {diag:.3e} < 1e-3"), diag < 1e-3);
    c.finish(start.elapsed(), Some(Duration::from_secs(10)))
}

fn ln_a(profile: &DecayProfile, n: usize) -> f64 {
    let t = TAU * (n as f64 - 1.0);
    match *profile {
        DecayProfile::Exponential { a } => a * t,
        DecayProfile::PowerLaw { p } => p * (1.0 + t).ln(),
        DecayProfile::StretchedExp { beta, c } => c * t.powf(beta),
        DecayProfile::UserTable(_) => unreachable!(),
    }
}

fn brute_force_oracle() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let profiles = [
        DecayProfile::exponential(1.0).unwrap(),
        DecayProfile::power_law(1.0).unwrap(),
        DecayProfile::stretched_exp(0.5, 1.0).unwrap(),
    ];
    for profile in profiles {
        for n_total in [10, 100, 1000] {
            let radii = winding_radii(&profile, n_total).unwrap();
            let ex = build_exceptional_union(&radii, &F1Spec::Auto, Some(10)).unwrap();
            let mut sets_ok = true;
            let mut union = BTreeSet::new();
            for m in 1..=10 {
                let naive: Vec<usize> = (1..n_total)
                    .filter(|&n| (ln_a(&profile, n + 1) - ln_a(&profile, n)).exp() >= 1.0 + 1.0 / m as f64)
                    .collect();
                sets_ok &= ex.exceptional_sets[m - 1] == naive;
                if let Some(&f) = ex.f1.get(m - 1) {
                    union.extend(naive.into_iter().filter(|&n| n >= f));
                }
            }
            let retained: Vec<usize> = (1..n_total).filter(|n| !union.contains(n)).collect();
            let union: Vec<usize> = union.into_iter().collect();
            c.check(
                format!("{profile} N={n_total}"),
                sets_ok && ex.union == union && ex.retained == retained,
            );
        }
    }
    c.finish(start.elapsed(), None)
}

fn exponential_negative_control() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let radii = winding_radii(&DecayProfile::exponential(1.0).unwrap(), 10_000).unwrap();
    let cls = subexp_classify(&radii, 1000, 0.05).unwrap();
    c.check("NotSubExponential", cls.verdict == DecayVerdict::NotSubExponential);
    let err = (cls.limit_estimate - TAU).abs();
    c.check(format!("trace limit - 2pi = {err:.1e}"), err <= 1e-6);
    let sub = extract_regular_subsequence(&radii).unwrap();
    c.check("extraction fails", !sub.success);
    let q = 0.001_867_442_731_707_988_8;
    let dev = (sub.successor_ratio_min - q).abs().max((sub.successor_ratio_max - q).abs());
    c.check(format!("constant ratio {:.8} (dev {dev:.1e})", sub.successor_ratio_min), dev <= 1e-8);
    c.finish(start.elapsed(), None)
}

fn certificate_sharpness() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let exp = winding_radii(&DecayProfile::exponential(1.0).unwrap(), 1000).unwrap();
    let cert = winding_certificate(&exp, CertificateVariant::PaperConstant, 1e-10).unwrap();
    let dev = cert.bounds.iter().map(|b| (b.l_min - 0.043_254_4).abs()).fold(0.0, f64::max);
    c.check(format!("exponential constant 0.0432544 (dev {dev:.1e})"), dev <= 1e-6);
    let pow = winding_radii(&DecayProfile::power_law(1.0).unwrap(), 1000).unwrap();
    let cert = winding_certificate(&pow, CertificateVariant::PaperConstant, 1e-10).unwrap();
    let l100 = cert.l_min(100);
    c.check(format!("L_min(100) = {l100:.6}"), (l100 - 9.9579).abs() <= 1e-3);
    let verdict = refute_unwinding(&cert, 10.0).unwrap().verdict;
    c.check(format!("{verdict:?}"), verdict == Refutation::RefutedAtIndex(101));
    c.finish(start.elapsed(), Some(Duration::from_secs(1)))
}

fn shear_ground_truth() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let inv = shear_spiral_map(-1.0).unwrap();
    let prof = DecayProfile::exponential(1.0).unwrap();
    let err = (0..=1000)
        .map(|i| {
            let s = 4.0 * PI * i as f64 / 1000.0;
            inv.apply(Point::new((-s).exp(), 0.0)).distance(prof.spiral_point(s).unwrap())
        })
        .fold(0.0, f64::max);
    c.check(format!("segment to spiral error {err:.1e}"), err < 1e-12);
    let fwd = shear_spiral_map(1.0).unwrap();
    let d = distortion_estimate(&fwd, Region::Annulus { inner: 0.01, outer: 1.0 }, 100_000, 42).unwrap();
    c.check(format!("l_est {:.9}", d.l_est), d.l_est >= 1.60 && d.l_est <= GOLDEN + 1e-9);
    let mut state = 42u64;
    let mut next = || {
        // splitmix64
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    };
    let rt = (0..10_000)
        .map(|_| {
            let p = Point::new(2.0 * next() - 1.0, 2.0 * next() - 1.0);
            inv.apply(fwd.apply(p)).distance(p)
        })
        .fold(0.0, f64::max);
    c.check(format!("round trip {rt:.1e}"), rt < 1e-9);
    c.finish(start.elapsed(), Some(Duration::from_secs(5)))
}

fn length_functional() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let inv = shear_spiral_map(-1.0).unwrap();
    let (a, b) = ((-TAU).exp(), 1.0);
    let r = partition_length(&inv, &[a, b]).unwrap();
    let target = 2f64.sqrt() * (1.0 - (-TAU).exp());
    c.check(format!("refined {:.8} over {} segments", r.refined, r.segments), r.converged && (r.refined - target).abs() <= 1e-5);
    let l = inv.declared_lipschitz().unwrap();
    c.check(format!("declared L {l:.7}"), (l - GOLDEN).abs() < 1e-7);
    c.check("sandwich", (b - a) / l <= r.refined && r.refined <= l * (b - a));
    c.finish(start.elapsed(), None)
}

fn direction_sets() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let deg = TAU / 360.0;
    let lo = 2f64.powi(-10);
    let seg: Vec<Point> = (0..10_000).map(|i| Point::new(lo + (1.0 - lo) * i as f64 / 9999.0, 0.0)).collect();
    let sched = ScaleSchedule::dyadic_for(&seg, Point::ORIGIN).unwrap();
    let ds = estimate_direction_set(&seg, Point::ORIGIN, &sched, deg, None).unwrap();
    let u = is_unwinded(&ds).unwrap();
    c.check(format!("segment persistent {:?}", ds.persistent), ds.persistent == [0] && u.unwinded);

    let prof = DecayProfile::power_law(1.0).unwrap();
    let cloud = prof.sample_spiral(40, 720).unwrap().points;
    let sched = ScaleSchedule::dyadic_for(&cloud, Point::ORIGIN).unwrap();
    let ds = estimate_direction_set(&cloud, Point::ORIGIN, &sched, deg, None).unwrap();
    let u = is_unwinded(&ds).unwrap();
    c.check(format!("spiral persistent {}", ds.persistent.len()), ds.persistent.len() == 360 && !u.unwinded);

    let radii = winding_radii(&prof, 41).unwrap();
    let sub = extract_regular_subsequence(&radii).unwrap();
    let rep = tilde_ssp_check(&cloud, Point::ORIGIN, &radii, &sub, &direction_grid(360), |_| 0.5 * deg).unwrap();
    let worst = rep.rows.iter().map(|r| r.max_defect.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    c.check(
        format!("annulus defect {:.2e} deg over {} annuli", worst.to_degrees(), rep.rows.len()),
        rep.rows.len() == 40 && worst <= 0.5 * deg,
    );
    c.finish(start.elapsed(), None)
}

fn transported_directions() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let deg = TAU / 360.0;

    let pow = DecayProfile::power_law(1.0).unwrap();
    let cloud = pow.sample_spiral(200, 720).unwrap().points;
    let radii = winding_radii(&pow, 201).unwrap();
    let sub = extract_regular_subsequence(&radii).unwrap();
    let sched = ScaleSchedule::dyadic_for(&cloud, Point::ORIGIN).unwrap();
    let target = estimate_direction_set(&cloud, Point::ORIGIN, &sched, deg, None).unwrap();
    let mut all_zero = true;
    for u in [Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::from_polar(1.0, 4.0)] {
        let tr = transported_direction_check(&MapExpr::Identity, &cloud, &radii, &sub.indices, u, deg, &target).unwrap();
        all_zero &= !tr.entries.is_empty() && tr.entries.iter().all(|e| e.defect == 0.0);
    }
    c.check(format!("identity zero defect on {} indices", sub.indices.len()), sub.success && all_zero);

    let exp = DecayProfile::exponential(1.0).unwrap();
    let cloud = exp.sample_spiral(50, 720).unwrap().points;
    let radii = winding_radii(&exp, 51).unwrap();
    let sub = extract_regular_subsequence(&radii).unwrap();
    let lo = 2f64.powi(-10);
    let seg: Vec<Point> = (0..10_000).map(|i| Point::new(lo + (1.0 - lo) * i as f64 / 9999.0, 0.0)).collect();
    let sched = ScaleSchedule::dyadic_for(&seg, Point::ORIGIN).unwrap();
    let target = estimate_direction_set(&seg, Point::ORIGIN, &sched, deg, None).unwrap();
    let idx: Vec<usize> = (1..radii.len()).collect();
    let sigma = shear_spiral_map(1.0).unwrap();
    let tr = transported_direction_check(&sigma, &cloud, &radii, &idx, Point::new(0.0, 1.0), deg, &target).unwrap();
    let above = tr.entries.iter().filter(|e| e.defect > 10.0 * deg).count();
    c.check(
        format!("sigma_1 on exponential: {above}/{} entries above 10 deg, regular={}", tr.entries.len(), sub.success),
        !sub.success && !tr.pass && 2 * above >= tr.entries.len() && !tr.entries.is_empty(),
    );
    c.finish(start.elapsed(), Some(Duration::from_secs(30)))
}

fn cli_determinism() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let bin = env!("CARGO_BIN_EXE_spiralwind");
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let p = |name: &str| d.join(name).to_str().unwrap().to_string();
    std::fs::write(d.join("pts.csv"), "x,y\n0.5,0.25\n-0.3,0.7\n0.01,-0.02\n1.5,0.0\n").unwrap();
    std::fs::write(d.join("phi.csv"), "t,phi\n0,1\n1,0.5\n2,0.3\n5,0.1\n10,0.01\n").unwrap();
    let runs: Vec<(&str, Vec<String>, Vec<String>)> = vec![
        ("profiles", vec!["profiles", "--profile", "pow:p=1", "--out", &p("a.csv"), "--json", &p("a.json")].into_iter().map(String::from).collect(), vec![p("a.csv"), p("a.json")]),
        ("profiles table", vec!["profiles", "--profile", &format!("table:{}", p("phi.csv")), "--windings", "1", "--json", &p("b.json")].into_iter().map(String::from).collect(), vec![p("b.json")]),
        ("radii", vec!["radii", "--profile", "sexp:beta=0.5,c=1", "--n", "500", "--out", &p("c.csv"), "--json", &p("c.json")].into_iter().map(String::from).collect(), vec![p("c.csv"), p("c.json")]),
        ("subseq", vec!["subseq", "--profile", "pow:p=1", "--n", "5000", "--m-max", "6", "--json", &p("d.json"), "--out", &p("d.csv")].into_iter().map(String::from).collect(), vec![p("d.json"), p("d.csv")]),
        ("certify", vec!["certify", "--profile", "pow:p=1", "--n", "300", "--variant", "arc", "--out", &p("e.csv"), "--json", &p("e.json")].into_iter().map(String::from).collect(), vec![p("e.csv"), p("e.json")]),
        ("refute", vec!["refute", "--profile", "pow:p=1", "--n", "1000", "--claimed-l", "10", "--json", &p("f.json")].into_iter().map(String::from).collect(), vec![p("f.json")]),
        ("directions", vec!["directions", "--profile", "pow:p=1", "--windings", "20", "--per-winding", "360", "--json", &p("g.json")].into_iter().map(String::from).collect(), vec![p("g.json")]),
        ("ssp", vec!["ssp", "--profile", "pow:p=1", "--windings", "10", "--per-winding", "360", "--directions", "36", "--tilde", "--out", &p("h.csv"), "--json", &p("h.json")].into_iter().map(String::from).collect(), vec![p("h.csv"), p("h.json")]),
        ("map-apply", vec!["map-apply", "--map", "compose:shear-spiral:gamma=1|rot:30", "--points", &p("pts.csv"), "--out", &p("i.csv")].into_iter().map(String::from).collect(), vec![p("i.csv")]),
        ("map-distortion", vec!["map-distortion", "--map", "shear-spiral:gamma=1", "--pairs", "20000", "--seed", "7", "--json", &p("j.json")].into_iter().map(String::from).collect(), vec![p("j.json")]),
        ("rescale-limit", vec!["rescale-limit", "--map", "shear-spiral:gamma=1", "--members", "200", "--tol", "0.05", "--out", &p("k.csv"), "--json", &p("k.json")].into_iter().map(String::from).collect(), vec![p("k.json")]),
        ("transport-check", vec!["transport-check", "--map", "shear-spiral:gamma=1", "--profile", "pow:p=1", "--windings", "40", "--json", &p("l.json")].into_iter().map(String::from).collect(), vec![p("l.json")]),
        ("length", vec!["length", "--map", "shear-spiral:gamma=-1", "--partition", "0.0018674427317079888,1", "--json", &p("m.json")].into_iter().map(String::from).collect(), vec![p("m.json")]),
    ];
    for (name, args, outputs) in &runs {
        let mut snapshots = Vec::new();
        let mut ok = true;
        for _ in 0..2 {
            let status = Command::new(bin).args(args).env("SPIRAL_THREADS", "3").output().unwrap();
            ok &= status.status.success();
            snapshots.push(outputs.iter().map(|o| std::fs::read(Path::new(o)).unwrap_or_default()).collect::<Vec<_>>());
        }
        ok &= snapshots[0] == snapshots[1] && snapshots[0].iter().all(|s| !s.is_empty());
        c.check(*name, ok);
    }
    c.finish(start.elapsed(), None)
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 pow:p=1 exceptional union at N=1e5", || lemma_construction(DecayProfile::power_law(1.0).unwrap())),
        ("1 sexp:beta=0.5,c=1 exceptional union at N=1e5", || {
            lemma_construction(DecayProfile::stretched_exp(0.5, 1.0).unwrap())
        }),
        ("2 brute-force oracle equivalence", brute_force_oracle),
        ("3 exponential negative control", exponential_negative_control),
        ("4 certificate sharpness", certificate_sharpness),
        ("5 shear spiral map ground truth", shear_ground_truth),
        ("6 length functional", length_functional),
        ("7 direction sets", direction_sets),
        ("8 transported directions", transported_directions),
        ("9 CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let out = run();
        if !out.pass {
            failed += 1;
        }
        println!("criterion {name}: {} ({})", if out.pass { "PASS" } else { "FAIL" }, out.detail);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
