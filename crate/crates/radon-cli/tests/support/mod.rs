#![allow(dead_code)]

//! Shared helpers for the CLI integration and acceptance tests: an
//! integer-lattice pair generator for kernel validation and dataset file
//! writers for driving the binary.

use std::path::Path;
use std::process::{Command, Output};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use radon::geom::{Geometry, LineString, Point, Polygon, Ring};

pub fn radon_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radon"))
}

pub fn run(args: &[&str]) -> Output {
    radon_bin().args(args).output().expect("binary spawns")
}

/// Write a dataset as `id<TAB>wkt` lines.
pub fn write_tsv(path: &Path, items: &[(String, Geometry)]) {
    let mut out = String::new();
    for (id, g) in items {
        out.push_str(id);
        out.push('\t');
        out.push_str(&g.to_wkt());
        out.push('\n');
    }
    std::fs::write(path, out).expect("dataset file written");
}

fn ipt(lon: i64, lat: i64) -> Point {
    Point::new(lon as f64, lat as f64).unwrap()
}

pub fn lattice_ring(rng: &mut ChaCha8Rng, cx: i64, cy: i64, radius: i64) -> Ring {
    loop {
        let n = rng.gen_range(3..=8);
        let mut verts: Vec<(f64, i64, i64)> = Vec::new();
        for _ in 0..n {
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(1..=radius) as f64;
            let x = cx + (r * ang.cos()).round() as i64;
            let y = cy + (r * ang.sin()).round() as i64;
            let a = ((y - cy) as f64).atan2((x - cx) as f64);
            verts.push((a, x, y));
        }
        verts.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
        verts.dedup_by_key(|v| (v.1, v.2));
        if verts.len() < 3 {
            continue;
        }
        let mut points: Vec<Point> = verts.iter().map(|&(_, x, y)| ipt(x, y)).collect();
        points.push(points[0]);
        if let Ok(ring) = Ring::new(points) {
            return ring;
        }
    }
}

pub fn lattice_rect(x0: i64, y0: i64, w: i64, h: i64) -> Ring {
    Ring::new(vec![
        ipt(x0, y0),
        ipt(x0 + w, y0),
        ipt(x0 + w, y0 + h),
        ipt(x0, y0 + h),
        ipt(x0, y0),
    ])
    .unwrap()
}

pub fn lattice_polygon(rng: &mut ChaCha8Rng, cx: i64, cy: i64) -> Polygon {
    if rng.gen_bool(0.4) {
        let w = rng.gen_range(1..=4);
        let h = rng.gen_range(1..=4);
        let hole = (w >= 3 && h >= 3 && rng.gen_bool(0.5))
            .then(|| lattice_rect(cx + 1, cy + 1, w - 2, h - 2));
        Polygon::new(lattice_rect(cx, cy, w, h), hole.into_iter().collect())
    } else {
        Polygon::new(lattice_ring(rng, cx, cy, 3), vec![])
    }
}

pub fn lattice_line(rng: &mut ChaCha8Rng, cx: i64, cy: i64) -> LineString {
    loop {
        let n = rng.gen_range(2..=4);
        let mut points = Vec::with_capacity(n);
        let (mut x, mut y) = (cx, cy);
        points.push(ipt(x, y));
        for _ in 1..n {
            x += rng.gen_range(-3..=3);
            y += rng.gen_range(-3..=3);
            points.push(ipt(x, y));
        }
        if rng.gen_bool(0.15) {
            points.push(points[0]);
        }
        if let Ok(l) = LineString::new(points) {
            return l;
        }
    }
}

pub fn lattice_geometry(rng: &mut ChaCha8Rng, cx: i64, cy: i64) -> Geometry {
    match rng.gen_range(0..10) {
        0 => Geometry::Point(ipt(cx, cy)),
        1 => Geometry::multi_point(vec![ipt(cx, cy), ipt(cx + 1, cy + 1)]).unwrap(),
        2 | 3 => Geometry::LineString(lattice_line(rng, cx, cy)),
        4 => Geometry::multi_line_string(vec![
            lattice_line(rng, cx, cy),
            lattice_line(rng, cx + 1, cy),
        ])
        .unwrap(),
        5 => Geometry::multi_polygon(vec![
            lattice_polygon(rng, cx, cy),
            lattice_polygon(rng, cx + 4, cy),
        ])
        .unwrap(),
        _ => Geometry::Polygon(lattice_polygon(rng, cx, cy)),
    }
}

/// Random geometry pairs within [0, 32]², biased towards interaction.
pub fn lattice_pair(rng: &mut ChaCha8Rng) -> (Geometry, Geometry) {
    let cx = rng.gen_range(4..28);
    let cy = rng.gen_range(4..28);
    let g1 = lattice_geometry(rng, cx, cy);
    let (jx, jy) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    let gap = rng.gen_range(3..=5);
    let g2 = match rng.gen_range(0..6) {
        0 => g1.clone(),
        1 => lattice_geometry(rng, cx, cy),
        2 | 3 => lattice_geometry(rng, cx + jx, cy + jy),
        4 => lattice_geometry(rng, cx + gap, cy),
        _ => lattice_geometry(rng, (cx + 14).min(28), (cy + 14).min(28)),
    };
    (g1, g2)
}
