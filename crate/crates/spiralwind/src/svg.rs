// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! Standalone SVG renderings. Output is a pure function of the input, with no
//! timestamps, so files are reproducible.

use std::fmt::Write;

use spiralwind_core::certificate::Certificate;
use spiralwind_core::directions::DirectionSet;
use spiralwind_core::maps::AaLimit;
use spiralwind_core::profiles::SpiralPolyline;
use spiralwind_core::Point;

use crate::error::{CliError, CliResult};

const HALF: f64 = 500.0;

fn header(out: &mut String, view: &str) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}">"#);
}

fn polyline(out: &mut String, pts: impl Iterator<Item = (f64, f64)>, style: &str) {
    out.push_str("<polyline points=\"");
    for (i, (x, y)) in pts.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.3},{y:.3}");
    }
    let _ = writeln!(out, "\" {style}/>");
}

/// One winding and the radial gap that closes it into a loop.
pub struct GammaOverlay {
    pub k: usize,
    pub winding: Vec<Point>,
    pub gap: (Point, Point),
}

/// The spiral polyline around the marked origin, optionally with a `Γ_k` overlay.
pub fn spiral(poly: &SpiralPolyline, overlay: Option<&GammaOverlay>) -> CliResult<String> {
    if poly.is_empty() {
        return Err(CliError::Usage("nothing to render: empty polyline".into()));
    }
    let o = poly.origin;
    let extent = poly.points.iter().map(|p| p.distance(o)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let k = 0.95 * HALF / extent;
    let map = |p: &Point| ((p.x - o.x) * k, -(p.y - o.y) * k);
    let mut s = String::new();
    header(&mut s, &format!("{} {} {} {}", -HALF, -HALF, 2.0 * HALF, 2.0 * HALF));
    polyline(&mut s, poly.points.iter().map(map), r##"fill="none" stroke="#2b5c8a" stroke-width="1""##);
    if let Some(g) = overlay {
        polyline(&mut s, g.winding.iter().map(map), r##"fill="none" stroke="#d7301f" stroke-width="3""##);
        let (a, b) = (map(&g.gap.0), map(&g.gap.1));
        let _ = writeln!(
            s,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#1a9850" stroke-width="3"/>"##,
            a.0, a.1, b.0, b.1
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="20">Γ_{}</text>"#, -HALF + 10.0, -HALF + 30.0, g.k);
    }
    let _ = writeln!(s, r#"<circle cx="0" cy="0" r="4" fill="black"/>"#);
    s.push_str("</svg>\n");
    Ok(s)
}

/// Step plot of `log10 L_min(n)`, with an optional horizontal budget line.
pub fn certificate(cert: &Certificate, budget: Option<f64>) -> CliResult<String> {
    if cert.is_empty() {
        return Err(CliError::Usage("nothing to render: empty certificate".into()));
    }
    let (w, h, pad) = (1000.0, 600.0, 60.0);
    let logs: Vec<f64> = cert.bounds.iter().map(|b| b.l_min.log10()).collect();
    let mut lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if let Some(b) = budget {
        lo = lo.min(b.log10());
        hi = hi.max(b.log10());
    }
    if hi - lo < 1e-9 {
        lo -= 0.5;
        hi += 0.5;
    }
    let n = cert.len() as f64;
    let x = |i: f64| pad + (w - 2.0 * pad) * (i - 1.0) / n.max(1.0);
    let y = |v: f64| h - pad - (h - 2.0 * pad) * (v - lo) / (hi - lo);
    let mut s = String::new();
    header(&mut s, &format!("0 0 {w} {h}"));
    let _ = write!(s, "<path d=\"M {:.3} {:.3}", x(1.0), y(logs[0]));
    for (i, v) in logs.iter().enumerate() {
        let _ = write!(s, " V {:.3} H {:.3}", y(*v), x(i as f64 + 2.0));
    }
    let _ = writeln!(s, r##"" fill="none" stroke="#2b5c8a" stroke-width="2"/>"##);
    if let Some(b) = budget {
        let yb = y(b.log10());
        let _ = writeln!(
            s,
            r##"<line x1="{pad}" y1="{yb:.3}" x2="{:.3}" y2="{yb:.3}" stroke="#d7301f" stroke-dasharray="6 4"/>"##,
            w - pad
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{pad}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/><line x1="{pad}" y1="{pad}" x2="{pad}" y2="{0}" stroke="black"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="16">n</text>"#, w / 2.0, h - 20.0);
    let _ = writeln!(s, r#"<text x="10" y="{}" font-size="16">log10 L_min</text>"#, pad - 20.0);
    let _ = writeln!(s, r#"<text x="{pad}" y="{}" font-size="12">{lo:.3}</text>"#, h - pad + 15.0);
    let _ = writeln!(s, r#"<text x="{pad}" y="{}" font-size="12">{hi:.3}</text>"#, pad - 5.0);
    s.push_str("</svg>\n");
    Ok(s)
}

fn wedge(out: &mut String, r0: f64, r1: f64, a0: f64, a1: f64, fill: &str) {
    let p = |r: f64, a: f64| (r * a.cos(), -r * a.sin());
    let (o0, o1, i1, i0) = (p(r1, a0), p(r1, a1), p(r0, a1), p(r0, a0));
    let _ = writeln!(
        out,
        r#"<path d="M {:.3} {:.3} A {r1:.3} {r1:.3} 0 0 0 {:.3} {:.3} L {:.3} {:.3} A {r0:.3} {r0:.3} 0 0 1 {:.3} {:.3} Z" fill="{fill}"/>"#,
        o0.0, o0.1, o1.0, o1.1, i1.0, i1.1, i0.0, i0.1
    );
}

/// Annular heatmap: one ring per scale layer (outermost first), one wedge per hit bin.
pub fn directions(ds: &DirectionSet) -> CliResult<String> {
    if ds.hits.iter().all(|layer| !layer.iter().any(|&h| h)) {
        return Err(CliError::Usage("nothing to render: empty direction set".into()));
    }
    let (inner, outer) = (80.0, 0.95 * HALF);
    let ring = (outer - inner) / ds.layers() as f64;
    let mut s = String::new();
    header(&mut s, &format!("{} {} {} {}", -HALF, -HALF, 2.0 * HALF, 2.0 * HALF));
    for (k, layer) in ds.hits.iter().enumerate() {
        let r1 = outer - k as f64 * ring;
        let r0 = r1 - ring;
        let counted = k >= ds.start_layer;
        for (j, &hit) in layer.iter().enumerate() {
            if !hit {
                continue;
            }
            let fill = match (counted, ds.is_persistent(j)) {
                (true, true) => "#08519c",
                (true, false) => "#6baed6",
                _ => "#c6dbef",
            };
            wedge(&mut s, r0, r1, j as f64 * ds.bin_width, (j + 1) as f64 * ds.bin_width, fill);
        }
    }
    for &j in &ds.persistent {
        let a = (j as f64 + 0.5) * ds.bin_width;
        let _ = writeln!(
            s,
            r##"<line x1="0" y1="0" x2="{:.3}" y2="{:.3}" stroke="#08306b" stroke-width="0.5"/>"##,
            inner * a.cos(),
            -inner * a.sin()
        );
    }
    let _ = writeln!(s, r#"<circle cx="0" cy="0" r="3" fill="black"/>"#);
    s.push_str("</svg>\n");
    Ok(s)
}

/// Probe grid (grey) joined to the limit table values (blue).
pub fn limit_table(lim: &AaLimit) -> CliResult<String> {
    if lim.grid.is_empty() {
        return Err(CliError::Usage("nothing to render: empty limit table".into()));
    }
    let extent = lim.grid.iter().chain(&lim.limit).map(|p| p.norm()).fold(0.0, f64::max);
    let k = 0.95 * HALF / extent;
    let mut s = String::new();
    header(&mut s, &format!("{} {} {} {}", -HALF, -HALF, 2.0 * HALF, 2.0 * HALF));
    for (x, h) in lim.grid.iter().zip(&lim.limit) {
        let _ = writeln!(
            s,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#bdbdbd" stroke-width="0.7"/><circle cx="{:.3}" cy="{:.3}" r="2" fill="#969696"/><circle cx="{:.3}" cy="{:.3}" r="2.5" fill="#2b5c8a"/>"##,
            x.x * k, -x.y * k, h.x * k, -h.y * k, x.x * k, -x.y * k, h.x * k, -h.y * k
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
