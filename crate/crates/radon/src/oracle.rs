//! Sampling-based DE-9IM reference, independent of the production kernel.
//!
//! Test support only (behind the `oracle` feature). The matrix is estimated
//! from classified sample points: a dense raster over the bounding boxes,
//! uniform and cut-point samples along every segment, perpendicular offset
//! probes beside the carriers, and a far corner. Point classification is a
//! separate implementation (downward ray casting, cross/dot on-segment
//! test) from the one in [`crate::geom`].

use crate::geom::{Class, De9imMatrix, Geometry, LineString, Point, Polygon};

/// Looser than the kernel's snapping tolerance; oracle corpora keep their
/// features far apart relative to this.
const TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Raster pitch over each geometry's inflated bounding box.
    pub grid_pitch: f64,
    /// Uniform subdivisions per segment.
    pub carrier_steps: usize,
    /// Perpendicular probe distances beside carrier points.
    pub offsets: Vec<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_pitch: 1.0 / 32.0,
            carrier_steps: 256,
            offsets: vec![1e-3, 1e-5, 1e-7],
        }
    }
}

/// Independent point classification: same union/even-odd semantics as the
/// kernel, different route.
pub fn classify(p: Point, g: &Geometry) -> Class {
    match g {
        Geometry::Point(q) => point_class(p, std::slice::from_ref(q)),
        Geometry::MultiPoint(qs) => point_class(p, qs),
        Geometry::LineString(l) => line_class(p, std::slice::from_ref(l)),
        Geometry::MultiLineString(ls) => line_class(p, ls),
        Geometry::Polygon(poly) => area_class(p, std::slice::from_ref(poly)),
        Geometry::MultiPolygon(ps) => area_class(p, ps),
    }
}

fn point_class(p: Point, members: &[Point]) -> Class {
    if members
        .iter()
        .any(|q| (p.lon - q.lon).abs() <= TOL && (p.lat - q.lat).abs() <= TOL)
    {
        Class::Interior
    } else {
        Class::Exterior
    }
}

fn on_seg(p: Point, a: Point, b: Point) -> bool {
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let len = (rx * rx + ry * ry).sqrt();
    if len <= TOL {
        return (p.lon - a.lon).abs() <= TOL && (p.lat - a.lat).abs() <= TOL;
    }
    let cross = rx * (p.lat - a.lat) - ry * (p.lon - a.lon);
    if cross.abs() > TOL * len {
        return false;
    }
    let dot = (p.lon - a.lon) * rx + (p.lat - a.lat) * ry;
    dot >= -TOL * len && dot <= len * len + TOL * len
}

fn line_class(p: Point, members: &[LineString]) -> Class {
    let mut on_carrier = false;
    for m in members {
        let pts = m.points();
        let closed = m.is_closed();
        let near = |q: &Point| (p.lon - q.lon).abs() <= TOL && (p.lat - q.lat).abs() <= TOL;
        for (k, w) in pts.windows(2).enumerate() {
            if !on_seg(p, w[0], w[1]) {
                continue;
            }
            on_carrier = true;
            let terminal =
                !closed && ((k == 0 && near(&w[0])) || (k == pts.len() - 2 && near(&w[1])));
            if !terminal {
                return Class::Interior;
            }
        }
    }
    if on_carrier {
        Class::Boundary
    } else {
        Class::Exterior
    }
}

fn area_class(p: Point, members: &[Polygon]) -> Class {
    let mut on_boundary = false;
    for m in members {
        let on_ring = m.rings().any(|r| r.edges().any(|(a, b)| on_seg(p, a, b)));
        if on_ring {
            on_boundary = true;
            continue;
        }
        // Downward ray casting (the kernel shoots rightward).
        let mut crossings = 0usize;
        for ring in m.rings() {
            for (a, b) in ring.edges() {
                if (a.lon > p.lon) != (b.lon > p.lon) {
                    let t = (p.lon - a.lon) / (b.lon - a.lon);
                    let y = a.lat + t * (b.lat - a.lat);
                    if y < p.lat {
                        crossings += 1;
                    }
                }
            }
        }
        if crossings % 2 == 1 {
            return Class::Interior;
        }
    }
    if on_boundary {
        Class::Boundary
    } else {
        Class::Exterior
    }
}

fn segments_of(g: &Geometry) -> Vec<(Point, Point)> {
    let mut segs = Vec::new();
    let mut push_line = |l: &LineString| {
        segs.extend(l.points().windows(2).map(|w| (w[0], w[1])));
    };
    match g {
        Geometry::Point(_) | Geometry::MultiPoint(_) => {}
        Geometry::LineString(l) => push_line(l),
        Geometry::MultiLineString(ls) => ls.iter().for_each(push_line),
        Geometry::Polygon(p) => {
            for r in p.rings() {
                segs.extend(r.edges());
            }
        }
        Geometry::MultiPolygon(ps) => {
            for p in ps {
                for r in p.rings() {
                    segs.extend(r.edges());
                }
            }
        }
    }
    segs
}

/// Parametric cut positions where the class pair may change along `seg`:
/// intersections with the other segments and any vertex lying on `seg`.
fn cut_params(seg: (Point, Point), others: &[(Point, Point)], vertices: &[Point]) -> Vec<f64> {
    let (a, b) = seg;
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let len2 = rx * rx + ry * ry;
    if len2 <= TOL * TOL {
        return vec![];
    }
    let param_of =
        |p: Point| (((p.lon - a.lon) * rx + (p.lat - a.lat) * ry) / len2).clamp(0.0, 1.0);
    let mut ts = Vec::new();
    for v in vertices {
        if on_seg(*v, a, b) {
            ts.push(param_of(*v));
        }
    }
    for &(c, d) in others {
        let (sx, sy) = (d.lon - c.lon, d.lat - c.lat);
        let denom = rx * sy - ry * sx;
        if denom.abs() > 1e-15 {
            let qpx = c.lon - a.lon;
            let qpy = c.lat - a.lat;
            let t = (qpx * sy - qpy * sx) / denom;
            let u = (qpx * ry - qpy * rx) / denom;
            if (-1e-9..=1.0 + 1e-9).contains(&t) && (-1e-9..=1.0 + 1e-9).contains(&u) {
                ts.push(t.clamp(0.0, 1.0));
            }
        } else {
            // Parallel: collinear endpoints projected onto the segment.
            if on_seg(c, a, b) {
                ts.push(param_of(c));
            }
            if on_seg(d, a, b) {
                ts.push(param_of(d));
            }
        }
    }
    ts
}

/// Estimate the DE-9IM matrix of two valid geometries from samples.
pub fn de9im(g1: &Geometry, g2: &Geometry, cfg: &OracleConfig) -> De9imMatrix {
    let mut present = [[false; 3]; 3];
    let mut linear = [[false; 3]; 3];

    let observe = |p: Point, present: &mut [[bool; 3]; 3]| -> (usize, usize) {
        let r = class_index(classify(p, g1));
        let c = class_index(classify(p, g2));
        present[r][c] = true;
        (r, c)
    };

    let segs1 = segments_of(g1);
    let segs2 = segments_of(g2);
    let verts: Vec<Point> = g1.vertices().into_iter().chain(g2.vertices()).collect();

    // Carrier walk: classify cut points and the midpoints of the pieces
    // between them; a matching piece midpoint is one-dimensional evidence.
    let mut offset_anchors: Vec<Point> = verts.clone();
    for (own, other) in [(&segs1, &segs2), (&segs2, &segs1)] {
        for seg in own.iter() {
            let (a, b) = *seg;
            let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
            let len = (rx * rx + ry * ry).sqrt();
            if len <= TOL {
                continue;
            }
            let mut ts = cut_params(*seg, other, &verts);
            ts.extend(cut_params(*seg, own, &verts));
            for k in 0..=cfg.carrier_steps {
                ts.push(k as f64 / cfg.carrier_steps as f64);
            }
            ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            ts.dedup_by(|x, y| (*x - *y).abs() * len <= TOL);
            let at = |t: f64| Point::raw(a.lon + t * rx, a.lat + t * ry);
            for w in ts.windows(2) {
                let cut = at(w[0]);
                observe(cut, &mut present);
                offset_anchors.push(cut);
                if (w[1] - w[0]) * len > 4.0 * TOL {
                    let (r, c) = observe(at((w[0] + w[1]) / 2.0), &mut present);
                    linear[r][c] = true;
                }
            }
            observe(b, &mut present);
        }
    }

    // Perpendicular probes beside the carriers catch thin two-dimensional
    // regions the raster may miss. Extra honest samples, never misleading.
    for anchor in &offset_anchors {
        for delta in &cfg.offsets {
            for (dx, dy) in [
                (1.0, 0.0),
                (-1.0, 0.0),
                (0.0, 1.0),
                (0.0, -1.0),
                (1.0, 1.0),
                (1.0, -1.0),
                (-1.0, 1.0),
                (-1.0, -1.0),
            ] {
                observe(
                    Point::raw(anchor.lon + dx * delta, anchor.lat + dy * delta),
                    &mut present,
                );
            }
        }
    }

    // Raster over each geometry's neighbourhood.
    for b in [g1.mbb(), g2.mbb()] {
        let pad = 2.0 * cfg.grid_pitch;
        let (lon0, lat0) = (b.lon_min - pad, b.lat_min - pad);
        let (lon1, lat1) = (b.lon_max + pad, b.lat_max + pad);
        let nx = ((lon1 - lon0) / cfg.grid_pitch).ceil() as usize + 1;
        let ny = ((lat1 - lat0) / cfg.grid_pitch).ceil() as usize + 1;
        for i in 0..nx {
            for j in 0..ny {
                observe(
                    Point::raw(
                        lon0 + i as f64 * cfg.grid_pitch,
                        lat0 + j as f64 * cfg.grid_pitch,
                    ),
                    &mut present,
                );
            }
        }
    }

    // A corner far outside both.
    let joint = g1.mbb().union(&g2.mbb());
    observe(
        Point::raw(joint.lon_max + 1.0, joint.lat_max + 1.0),
        &mut present,
    );

    assemble(g1, g2, &present, &linear)
}

/// Classified raster only, for the pure rasterization emptiness check:
/// a matching grid sample proves an entry non-empty.
pub fn raster_present(g1: &Geometry, g2: &Geometry, pitch: f64) -> [[bool; 3]; 3] {
    let mut present = [[false; 3]; 3];
    let joint = g1.mbb().union(&g2.mbb());
    let pad = 2.0 * pitch;
    let (lon0, lat0) = (joint.lon_min - pad, joint.lat_min - pad);
    let nx = ((joint.lon_max + pad - lon0) / pitch).ceil() as usize + 1;
    let ny = ((joint.lat_max + pad - lat0) / pitch).ceil() as usize + 1;
    for i in 0..nx {
        for j in 0..ny {
            let p = Point::raw(lon0 + i as f64 * pitch, lat0 + j as f64 * pitch);
            let r = class_index(classify(p, g1));
            let c = class_index(classify(p, g2));
            present[r][c] = true;
        }
    }
    present
}

fn class_index(c: Class) -> usize {
    match c {
        Class::Interior => 0,
        Class::Boundary => 1,
        Class::Exterior => 2,
    }
}

fn assemble(
    g1: &Geometry,
    g2: &Geometry,
    present: &[[bool; 3]; 3],
    linear: &[[bool; 3]; 3],
) -> De9imMatrix {
    let caps1 = [g1.dimension(), g1.boundary_dimension(), 2];
    let caps2 = [g2.dimension(), g2.boundary_dimension(), 2];
    let mut entries = [[-1i8; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let cap = caps1[r].min(caps2[c]);
            entries[r][c] = if cap < 0 || !present[r][c] {
                -1
            } else if cap == 2 {
                // Both sets are open: any common point implies an open patch.
                2
            } else if cap == 1 && linear[r][c] {
                1
            } else {
                0
            };
        }
    }
    // Bounded geometries always leave common far plane.
    entries[2][2] = 2;
    De9imMatrix::from_entries(entries)
}
