//! Seeded synthetic corpora: clustered mixtures of points, polylines and
//! polygons, with controllable fractions of nested shapes, duplicates,
//! border-sharing rectangles and antimeridian crossers. Stands in for the
//! land-cover-style workloads the engine targets: many small clustered
//! patches vs fewer large regions.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use radon::dataset::{Dataset, Role};
use radon::geom::{Geometry, LineString, Point, Polygon, Ring};

#[derive(Debug, Clone)]
pub struct SyntheticCorpusSpec {
    pub points: usize,
    pub lines: usize,
    pub polygons: usize,
    /// Number of cluster patches the shapes concentrate in.
    pub clusters: usize,
    /// Half-extent of a cluster patch in degrees.
    pub cluster_spread: f64,
    /// lon_min, lat_min, lon_max, lat_max.
    pub window: (f64, f64, f64, f64),
    /// Fraction of shapes generated across the ±180 meridian.
    pub antimeridian_fraction: f64,
    /// Fraction of polygons that get a scaled-down copy inside them.
    pub nested_fraction: f64,
    /// Fraction of shapes emitted twice under distinct ids.
    pub duplicate_fraction: f64,
    /// Fraction of polygons emitted with an edge-sharing neighbour.
    pub border_fraction: f64,
    /// Seed for the cluster layout; share it between source and target so
    /// both datasets populate the same patches.
    pub layout_seed: u64,
    /// Seed for the shapes themselves.
    pub shape_seed: u64,
}

impl SyntheticCorpusSpec {
    /// Mixed corpus with every special configuration present.
    pub fn mixed(count: usize, clusters: usize, layout_seed: u64, shape_seed: u64) -> Self {
        SyntheticCorpusSpec {
            points: count / 5,
            lines: count / 5,
            polygons: count - 2 * (count / 5),
            clusters,
            cluster_spread: 2.0,
            window: (-170.0, -80.0, 170.0, 80.0),
            antimeridian_fraction: 0.04,
            nested_fraction: 0.1,
            duplicate_fraction: 0.06,
            border_fraction: 0.08,
            layout_seed,
            shape_seed,
        }
    }

    /// Polygon-only corpus in well-separated clusters.
    pub fn clustered_polygons(
        count: usize,
        clusters: usize,
        layout_seed: u64,
        shape_seed: u64,
    ) -> Self {
        SyntheticCorpusSpec {
            points: 0,
            lines: 0,
            polygons: count,
            clusters,
            cluster_spread: 1.0,
            window: (-160.0, -70.0, 160.0, 70.0),
            antimeridian_fraction: 0.0,
            nested_fraction: 0.05,
            duplicate_fraction: 0.0,
            border_fraction: 0.0,
            layout_seed,
            shape_seed,
        }
    }
}

pub fn generate(spec: &SyntheticCorpusSpec, id_prefix: &str) -> Vec<(String, Geometry)> {
    let centers = cluster_centers(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.shape_seed);
    let mut out: Vec<(String, Geometry)> = Vec::new();
    let mut serial = 0usize;
    let next_id = |serial: &mut usize| {
        let id = format!("{id_prefix}{serial:06}");
        *serial += 1;
        id
    };

    let emit = |g: Geometry,
                out: &mut Vec<(String, Geometry)>,
                serial: &mut usize,
                rng: &mut ChaCha8Rng| {
        if rng.gen_bool(spec.duplicate_fraction) {
            out.push((next_id(serial), g.clone()));
        }
        out.push((next_id(serial), g));
    };

    for kind in 0..3 {
        let count = [spec.points, spec.lines, spec.polygons][kind];
        for _ in 0..count {
            let center = pick_center(&centers, spec, &mut rng);
            match kind {
                0 => {
                    let g = Geometry::Point(cluster_point(&mut rng, center, spec.cluster_spread));
                    emit(g, &mut out, &mut serial, &mut rng);
                }
                1 => {
                    let g = random_line(&mut rng, center, spec.cluster_spread);
                    emit(g, &mut out, &mut serial, &mut rng);
                }
                _ => {
                    let poly = random_polygon(&mut rng, center, spec.cluster_spread);
                    if rng.gen_bool(spec.nested_fraction) {
                        if let Some(inner) = shrink_polygon(&poly, 0.4) {
                            emit(Geometry::Polygon(inner), &mut out, &mut serial, &mut rng);
                        }
                    }
                    if rng.gen_bool(spec.border_fraction) {
                        let (a, b) = bordered_rects(&mut rng, center, spec.cluster_spread);
                        emit(Geometry::Polygon(a), &mut out, &mut serial, &mut rng);
                        emit(Geometry::Polygon(b), &mut out, &mut serial, &mut rng);
                    }
                    emit(Geometry::Polygon(poly), &mut out, &mut serial, &mut rng);
                }
            }
        }
    }

    // A guaranteed floor of shapes passing over the ±180 meridian, on top
    // of the probabilistic near-meridian patch.
    let guaranteed = (spec.antimeridian_fraction * out.len() as f64).ceil() as usize;
    for _ in 0..guaranteed {
        let lat = rng.gen_range(-60.0..60.0);
        let g = if rng.gen_bool(0.5) {
            let west = rng.gen_range(0.3..1.5);
            let east = rng.gen_range(0.3..1.5);
            let h = rng.gen_range(0.3..1.5);
            let pts = vec![
                make_point(180.0 - west, lat),
                make_point(180.0 + east, lat),
                make_point(180.0 + east, lat + h),
                make_point(180.0 - west, lat + h),
                make_point(180.0 - west, lat),
            ];
            Geometry::Polygon(Polygon::new(
                Ring::new(pts).expect("crossing rectangle"),
                vec![],
            ))
        } else {
            let pts = vec![
                make_point(180.0 - rng.gen_range(0.2..1.5), lat),
                make_point(
                    180.0 + rng.gen_range(0.2..1.5),
                    lat + rng.gen_range(-1.0..1.0),
                ),
            ];
            Geometry::LineString(LineString::new(pts).expect("crossing segment"))
        };
        emit(g, &mut out, &mut serial, &mut rng);
    }
    out
}

pub fn generate_dataset(spec: &SyntheticCorpusSpec, role: Role, id_prefix: &str) -> Dataset {
    Dataset::new(role, generate(spec, id_prefix)).expect("generator produces records")
}

/// Cluster centers on a jittered grid over the window, so clusters stay
/// well separated whenever the spread is small against the window.
fn cluster_centers(spec: &SyntheticCorpusSpec) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.layout_seed);
    let (lon0, lat0, lon1, lat1) = spec.window;
    let k = spec.clusters.max(1);
    let cols = (k as f64).sqrt().ceil() as usize;
    let rows = k.div_ceil(cols);
    let (dw, dh) = ((lon1 - lon0) / cols as f64, (lat1 - lat0) / rows as f64);
    let mut centers = Vec::with_capacity(k);
    'outer: for r in 0..rows {
        for c in 0..cols {
            if centers.len() == k {
                break 'outer;
            }
            let jitter_lon = rng.gen_range(0.3..0.7);
            let jitter_lat = rng.gen_range(0.3..0.7);
            centers.push((
                lon0 + (c as f64 + jitter_lon) * dw,
                lat0 + (r as f64 + jitter_lat) * dh,
            ));
        }
    }
    centers
}

fn pick_center(
    centers: &[(f64, f64)],
    spec: &SyntheticCorpusSpec,
    rng: &mut ChaCha8Rng,
) -> (f64, f64) {
    if rng.gen_bool(spec.antimeridian_fraction) {
        // A patch straddling ±180.
        (180.0, rng.gen_range(-60.0..60.0))
    } else {
        centers[rng.gen_range(0..centers.len())]
    }
}

/// Wrap a raw longitude into [-180, 180].
fn wrap_lon(lon: f64) -> f64 {
    if lon > 180.0 {
        lon - 360.0
    } else if lon < -180.0 {
        lon + 360.0
    } else {
        lon
    }
}

fn make_point(lon: f64, lat: f64) -> Point {
    Point::new(wrap_lon(lon), lat.clamp(-89.9, 89.9)).expect("generated coordinate in range")
}

fn cluster_point(rng: &mut ChaCha8Rng, center: (f64, f64), spread: f64) -> Point {
    make_point(
        center.0 + rng.gen_range(-spread..spread),
        center.1 + rng.gen_range(-spread..spread),
    )
}

fn random_line(rng: &mut ChaCha8Rng, center: (f64, f64), spread: f64) -> Geometry {
    loop {
        let n = rng.gen_range(2..=5);
        let mut lon = center.0 + rng.gen_range(-spread..spread);
        let mut lat = center.1 + rng.gen_range(-spread..spread);
        let mut pts = vec![make_point(lon, lat)];
        for _ in 1..n {
            lon += rng.gen_range(-spread..spread) * 0.6;
            lat += rng.gen_range(-spread..spread) * 0.6;
            pts.push(make_point(lon, lat));
        }
        if let Ok(l) = LineString::new(pts) {
            return Geometry::LineString(l);
        }
    }
}

/// Star-shaped polygon around the center: strictly increasing angles keep
/// the ring simple.
fn random_polygon(rng: &mut ChaCha8Rng, center: (f64, f64), spread: f64) -> Polygon {
    loop {
        let n = rng.gen_range(4..=10);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b) < 1e-3);
        if angles.len() < 3 {
            continue;
        }
        let mut pts: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(0.2..1.0) * spread;
                make_point(center.0 + r * a.cos(), center.1 + r * a.sin())
            })
            .collect();
        pts.push(pts[0]);
        if let Ok(ring) = Ring::new(pts) {
            return Polygon::new(ring, vec![]);
        }
    }
}

/// Scale a polygon towards its bounding-box center; None when the result
/// degenerates.
fn shrink_polygon(poly: &Polygon, factor: f64) -> Option<Polygon> {
    let b = Geometry::Polygon(poly.clone()).mbb();
    let (cx, cy) = ((b.lon_min + b.lon_max) / 2.0, (b.lat_min + b.lat_max) / 2.0);
    let pts: Vec<Point> = poly
        .exterior()
        .points()
        .iter()
        .map(|p| make_point(cx + (p.lon - cx) * factor, cy + (p.lat - cy) * factor))
        .collect();
    Ring::new(pts).ok().map(|r| Polygon::new(r, vec![]))
}

/// Two rectangles sharing a full vertical edge.
fn bordered_rects(rng: &mut ChaCha8Rng, center: (f64, f64), spread: f64) -> (Polygon, Polygon) {
    let w = rng.gen_range(0.2..0.6) * spread;
    let h = rng.gen_range(0.2..0.6) * spread;
    let (x, y) = (center.0 + rng.gen_range(-spread..spread) * 0.3, center.1);
    let rect = |x0: f64, x1: f64| {
        let pts = vec![
            make_point(x0, y),
            make_point(x1, y),
            make_point(x1, y + h),
            make_point(x0, y + h),
            make_point(x0, y),
        ];
        Polygon::new(Ring::new(pts).expect("axis-aligned rectangle"), vec![])
    };
    (rect(x - w, x), rect(x, x + w))
}
