#![allow(dead_code)]

//! Shared generators for the integration tests: integer-lattice geometry
//! pairs for kernel differentials, and clustered float corpora for
//! end-to-end linking checks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use radon::dataset::{Dataset, Role};
use radon::geom::{Geometry, LineString, Point, Polygon, Ring};

pub fn pt(lon: f64, lat: f64) -> Point {
    Point::new(lon, lat).unwrap()
}

fn ipt(lon: i64, lat: i64) -> Point {
    pt(lon as f64, lat as f64)
}

/// Star-shaped simple polygon with lattice vertices; retries until valid.
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

/// Pairs biased towards interaction: overlapping, touching, nested,
/// identical, and fully separated placements all occur.
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

fn wrap_lon(lon: f64) -> f64 {
    if lon > 180.0 {
        lon - 360.0
    } else if lon < -180.0 {
        lon + 360.0
    } else {
        lon
    }
}

fn fpt(lon: f64, lat: f64) -> Point {
    pt(wrap_lon(lon), lat.clamp(-89.0, 89.0))
}

fn float_polygon(rng: &mut ChaCha8Rng, cx: f64, cy: f64, spread: f64) -> Geometry {
    loop {
        let n = rng.gen_range(4..=9);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b) < 1e-2);
        if angles.len() < 3 {
            continue;
        }
        let mut pts: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(0.2..1.0) * spread;
                fpt(cx + r * a.cos(), cy + r * a.sin())
            })
            .collect();
        pts.push(pts[0]);
        if let Ok(ring) = Ring::new(pts) {
            return Geometry::Polygon(Polygon::new(ring, vec![]));
        }
    }
}

fn float_line(rng: &mut ChaCha8Rng, cx: f64, cy: f64, spread: f64) -> Geometry {
    loop {
        let n = rng.gen_range(2..=4);
        let mut lon = cx + rng.gen_range(-spread..spread);
        let mut lat = cy + rng.gen_range(-spread..spread);
        let mut pts = vec![fpt(lon, lat)];
        for _ in 1..n {
            lon += rng.gen_range(-spread..spread);
            lat += rng.gen_range(-spread..spread);
            pts.push(fpt(lon, lat));
        }
        if let Ok(l) = LineString::new(pts) {
            return Geometry::LineString(l);
        }
    }
}

/// Clustered mixed corpus with nested shapes, duplicates, border-sharing
/// rectangles and a share of antimeridian crossers.
pub fn cluster_corpus(
    rng: &mut ChaCha8Rng,
    count: usize,
    clusters: usize,
) -> Vec<(String, Geometry)> {
    let centers: Vec<(f64, f64)> = (0..clusters)
        .map(|k| {
            if k == 0 {
                // One patch across ±180.
                (180.0, rng.gen_range(-40.0..40.0))
            } else {
                (rng.gen_range(-150.0..150.0), rng.gen_range(-60.0..60.0))
            }
        })
        .collect();
    let spread = 2.0;
    let mut out: Vec<(String, Geometry)> = Vec::new();
    let mut k = 0usize;
    while out.len() < count {
        let (cx, cy) = centers[rng.gen_range(0..centers.len())];
        let g = match rng.gen_range(0..10) {
            0 => Geometry::Point(fpt(
                cx + rng.gen_range(-spread..spread),
                cy + rng.gen_range(-spread..spread),
            )),
            1 | 2 => float_line(rng, cx, cy, spread),
            3 => {
                // Border-sharing rectangles; the partner follows.
                let w = rng.gen_range(0.3..1.0);
                let h = rng.gen_range(0.3..1.0);
                let rect = |x0: f64, x1: f64| {
                    let pts = vec![
                        fpt(x0, cy),
                        fpt(x1, cy),
                        fpt(x1, cy + h),
                        fpt(x0, cy + h),
                        fpt(x0, cy),
                    ];
                    Geometry::Polygon(Polygon::new(Ring::new(pts).unwrap(), vec![]))
                };
                out.push((format!("g{k}"), rect(cx - w, cx)));
                k += 1;
                rect(cx, cx + w)
            }
            _ => float_polygon(rng, cx, cy, spread),
        };
        if rng.gen_bool(0.08) {
            // Duplicate under a fresh id.
            out.push((format!("g{k}"), g.clone()));
            k += 1;
        }
        if rng.gen_bool(0.1) {
            if let Geometry::Polygon(_) = &g {
                // Nested copy: shrink towards the box center.
                let b = g.mbb();
                let (mx, my) = ((b.lon_min + b.lon_max) / 2.0, (b.lat_min + b.lat_max) / 2.0);
                if b.lon_extent() < 90.0 {
                    if let Geometry::Polygon(p) = &g {
                        let pts: Vec<Point> = p
                            .exterior()
                            .points()
                            .iter()
                            .map(|q| fpt(mx + (q.lon - mx) * 0.5, my + (q.lat - my) * 0.5))
                            .collect();
                        if let Ok(r) = Ring::new(pts) {
                            out.push((format!("g{k}"), Geometry::Polygon(Polygon::new(r, vec![]))));
                            k += 1;
                        }
                    }
                }
            }
        }
        out.push((format!("g{k}"), g));
        k += 1;
    }
    out
}

pub fn cluster_dataset(rng: &mut ChaCha8Rng, role: Role, count: usize, clusters: usize) -> Dataset {
    Dataset::new(role, cluster_corpus(rng, count, clusters)).unwrap()
}
