//! Exact DE-9IM computation for planar point/line/area geometries.
//!
//! The matrix is derived from a finite set of witness points whose
//! classification (interior/boundary/exterior) against both geometries is
//! decidable: segment endpoints and pairwise segment intersections (event
//! points), midpoints of the sub-segments obtained by splitting every
//! segment at the event points lying on it, perpendicular probes beside
//! each sub-segment at a distance below the clearance to every other
//! feature, and interior sample points of each polygon member. After the
//! split, classification is constant along each open sub-segment and on
//! each of its two sides, so the witness set decides every matrix entry.
//! Coincidence tests snap at [`EPS`](super::EPS); features closer than the
//! tolerance without being coincident are outside the accuracy contract.

use thiserror::Error;

use super::de9im::{De9imMatrix, Space, SPACES};
use super::{Geometry, LineString, Mbb, Point, Polygon, EPS};

/// Which of the three point sets of a geometry a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Interior,
    Boundary,
    Exterior,
}

impl Class {
    fn index(self) -> usize {
        match self {
            Class::Interior => 0,
            Class::Boundary => 1,
            Class::Exterior => 2,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("numerical degeneracy while relating geometries: {0}")]
    NumericalDegeneracy(String),
}

/// Classify a point against a geometry under the even-odd rule, with
/// interior taking precedence over boundary across members.
pub fn classify(p: Point, g: &Geometry) -> Class {
    match g {
        Geometry::Point(q) => {
            if p.close_to(q, EPS) {
                Class::Interior
            } else {
                Class::Exterior
            }
        }
        Geometry::MultiPoint(qs) => {
            if qs.iter().any(|q| p.close_to(q, EPS)) {
                Class::Interior
            } else {
                Class::Exterior
            }
        }
        Geometry::LineString(l) => classify_lines(p, std::slice::from_ref(l)),
        Geometry::MultiLineString(ls) => classify_lines(p, ls),
        Geometry::Polygon(poly) => classify_areas(p, std::slice::from_ref(poly)),
        Geometry::MultiPolygon(ps) => classify_areas(p, ps),
    }
}

fn classify_lines(p: Point, members: &[LineString]) -> Class {
    let mut on_carrier = false;
    for m in members {
        let pts = m.points();
        let closed = m.is_closed();
        let last_seg = pts.len() - 2;
        for (k, w) in pts.windows(2).enumerate() {
            if !point_on_segment(p, w[0], w[1]) {
                continue;
            }
            on_carrier = true;
            let at_first_terminal = !closed && k == 0 && p.close_to(&w[0], EPS);
            let at_last_terminal = !closed && k == last_seg && p.close_to(&w[1], EPS);
            if !(at_first_terminal || at_last_terminal) {
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

fn classify_areas(p: Point, members: &[Polygon]) -> Class {
    let mut on_boundary = false;
    for m in members {
        let on_ring = m
            .rings()
            .any(|r| r.edges().any(|(a, b)| point_on_segment(p, a, b)));
        if on_ring {
            on_boundary = true;
        } else if even_odd_inside(p, m) {
            return Class::Interior;
        }
    }
    if on_boundary {
        Class::Boundary
    } else {
        Class::Exterior
    }
}

/// Crossing-number test over all rings. Assumes `p` is not on any ring;
/// the half-open rule keeps vertex crossings consistent.
fn even_odd_inside(p: Point, poly: &Polygon) -> bool {
    let mut inside = false;
    for ring in poly.rings() {
        for (a, b) in ring.edges() {
            if (a.lat > p.lat) != (b.lat > p.lat) {
                let t = (p.lat - a.lat) / (b.lat - a.lat);
                let x = a.lon + t * (b.lon - a.lon);
                if x > p.lon {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

pub(super) fn point_on_segment(p: Point, a: Point, b: Point) -> bool {
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let len2 = rx * rx + ry * ry;
    if len2 <= EPS * EPS {
        return p.close_to(&a, EPS);
    }
    let t = (((p.lon - a.lon) * rx + (p.lat - a.lat) * ry) / len2).clamp(0.0, 1.0);
    let (cx, cy) = (a.lon + t * rx - p.lon, a.lat + t * ry - p.lat);
    cx * cx + cy * cy <= EPS * EPS
}

/// Intersection events of two segments after EPS snapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(super) enum SegEvents {
    None,
    Point(Point),
    Overlap(Point, Point),
}

pub(super) fn seg_seg_events(a: Point, b: Point, c: Point, d: Point) -> SegEvents {
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let (sx, sy) = (d.lon - c.lon, d.lat - c.lat);
    let len_r = (rx * rx + ry * ry).sqrt();
    let len_s = (sx * sx + sy * sy).sqrt();

    if len_r <= EPS && len_s <= EPS {
        return if a.close_to(&c, EPS) {
            SegEvents::Point(a)
        } else {
            SegEvents::None
        };
    }
    if len_r <= EPS {
        return if point_on_segment(a, c, d) {
            SegEvents::Point(a)
        } else {
            SegEvents::None
        };
    }
    if len_s <= EPS {
        return if point_on_segment(c, a, b) {
            SegEvents::Point(c)
        } else {
            SegEvents::None
        };
    }

    // Signed distances of c and d from the support line of (a, b).
    let dc = (rx * (c.lat - a.lat) - ry * (c.lon - a.lon)) / len_r;
    let dd = (rx * (d.lat - a.lat) - ry * (d.lon - a.lon)) / len_r;

    if dc.abs() <= EPS && dd.abs() <= EPS {
        // Collinear: overlap interval in the parameter space of (a, b).
        let len2 = len_r * len_r;
        let tc = ((c.lon - a.lon) * rx + (c.lat - a.lat) * ry) / len2;
        let td = ((d.lon - a.lon) * rx + (d.lat - a.lat) * ry) / len2;
        let (t0, t1) = if tc <= td { (tc, td) } else { (td, tc) };
        let eps_t = EPS / len_r;
        let lo = t0.max(0.0);
        let hi = t1.min(1.0);
        if hi < lo - eps_t {
            return SegEvents::None;
        }
        if hi - lo <= eps_t {
            let p = snap_to(param_point(a, rx, ry, (lo + hi) / 2.0), &[a, b, c, d]);
            return SegEvents::Point(p);
        }
        let p0 = snap_to(param_point(a, rx, ry, lo), &[a, b, c, d]);
        let p1 = snap_to(param_point(a, rx, ry, hi), &[a, b, c, d]);
        return SegEvents::Overlap(p0, p1);
    }

    let denom = rx * sy - ry * sx;
    if denom == 0.0 {
        return SegEvents::None;
    }
    let qpx = c.lon - a.lon;
    let qpy = c.lat - a.lat;
    let t = (qpx * sy - qpy * sx) / denom;
    let u = (qpx * ry - qpy * rx) / denom;
    let eps_t = EPS / len_r;
    let eps_u = EPS / len_s;
    if t < -eps_t || t > 1.0 + eps_t || u < -eps_u || u > 1.0 + eps_u {
        return SegEvents::None;
    }
    let p = snap_to(param_point(a, rx, ry, t.clamp(0.0, 1.0)), &[a, b, c, d]);
    SegEvents::Point(p)
}

fn param_point(a: Point, rx: f64, ry: f64, t: f64) -> Point {
    Point::raw(a.lon + t * rx, a.lat + t * ry)
}

fn snap_to(p: Point, anchors: &[Point]) -> Point {
    for q in anchors {
        if p.close_to(q, EPS) {
            return *q;
        }
    }
    p
}

/// Decomposed view of a geometry for the witness engine.
struct Decomp {
    dim: i8,
    boundary_dim: i8,
    segs: Vec<(Point, Point)>,
    isolated: Vec<Point>,
    vertices: Vec<Point>,
    area_reps: Vec<Point>,
}

impl Decomp {
    fn of(g: &Geometry) -> Decomp {
        let mut segs = Vec::new();
        let mut isolated = Vec::new();
        let mut area_reps = Vec::new();
        match g {
            Geometry::Point(p) => isolated.push(*p),
            Geometry::MultiPoint(ps) => isolated.extend_from_slice(ps),
            Geometry::LineString(l) => push_line_segs(&mut segs, l),
            Geometry::MultiLineString(ls) => {
                for l in ls {
                    push_line_segs(&mut segs, l);
                }
            }
            Geometry::Polygon(p) => push_area(&mut segs, &mut area_reps, p),
            Geometry::MultiPolygon(ps) => {
                for p in ps {
                    push_area(&mut segs, &mut area_reps, p);
                }
            }
        }
        Decomp {
            dim: g.dimension(),
            boundary_dim: g.boundary_dimension(),
            segs,
            isolated,
            vertices: g.vertices(),
            area_reps,
        }
    }
}

/// One point on each side of a sub-segment midpoint, at half the clearance
/// to the nearest feature not carrying the midpoint. Within that radius the
/// side regions contain no carrier, so each probe lands in the open region
/// bordering the sub-segment. Returns None when the clearance is at
/// tolerance scale.
fn side_probes(
    seg: (Point, Point),
    mid: Point,
    segs: &[(Point, Point)],
    isolated: &[Point],
) -> Option<(Point, Point)> {
    let (a, b) = seg;
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let len = (rx * rx + ry * ry).sqrt();
    if len <= EPS {
        return None;
    }
    let mut clearance = f64::INFINITY;
    for &(c, d) in segs {
        let dist = point_seg_distance(mid, c, d);
        if dist > EPS {
            clearance = clearance.min(dist);
        }
    }
    for p in isolated {
        let dist = ((mid.lon - p.lon).powi(2) + (mid.lat - p.lat).powi(2)).sqrt();
        if dist > EPS {
            clearance = clearance.min(dist);
        }
    }
    let delta = if clearance.is_finite() {
        clearance * 0.5
    } else {
        1.0
    };
    if delta <= 4.0 * EPS {
        return None;
    }
    let (nx, ny) = (-ry / len, rx / len);
    Some((
        Point::raw(mid.lon + nx * delta, mid.lat + ny * delta),
        Point::raw(mid.lon - nx * delta, mid.lat - ny * delta),
    ))
}

fn point_seg_distance(p: Point, a: Point, b: Point) -> f64 {
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let len2 = rx * rx + ry * ry;
    let t = if len2 <= EPS * EPS {
        0.0
    } else {
        (((p.lon - a.lon) * rx + (p.lat - a.lat) * ry) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.lon + t * rx - p.lon, a.lat + t * ry - p.lat);
    (cx * cx + cy * cy).sqrt()
}

fn push_line_segs(segs: &mut Vec<(Point, Point)>, l: &LineString) {
    segs.extend(l.points().windows(2).map(|w| (w[0], w[1])));
}

fn push_area(segs: &mut Vec<(Point, Point)>, reps: &mut Vec<Point>, p: &Polygon) {
    for r in p.rings() {
        segs.extend(r.edges());
    }
    reps.extend(interior_points(p));
}

/// Interior sample points of a polygon member: midpoints of the inside
/// spans of a horizontal scanline chosen strictly between vertex latitudes,
/// so every crossing is transversal.
fn interior_points(poly: &Polygon) -> Vec<Point> {
    let mut lats: Vec<f64> = poly
        .rings()
        .flat_map(|r| r.points().iter().map(|p| p.lat))
        .collect();
    lats.sort_by(|a, b| a.partial_cmp(b).expect("finite latitudes"));
    lats.dedup_by(|a, b| (*a - *b).abs() <= EPS);

    for w in lats.windows(2) {
        if w[1] - w[0] <= 4.0 * EPS {
            continue;
        }
        let y = (w[0] + w[1]) / 2.0;
        let mut xs: Vec<f64> = Vec::new();
        for ring in poly.rings() {
            for (a, b) in ring.edges() {
                if (a.lat > y) != (b.lat > y) {
                    let t = (y - a.lat) / (b.lat - a.lat);
                    xs.push(a.lon + t * (b.lon - a.lon));
                }
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite crossings"));
        let mut reps = Vec::new();
        let mut k = 0;
        while k + 1 < xs.len() {
            if xs[k + 1] - xs[k] > 4.0 * EPS {
                reps.push(Point::raw((xs[k] + xs[k + 1]) / 2.0, y));
            }
            k += 2;
        }
        if !reps.is_empty() {
            return reps;
        }
    }
    Vec::new()
}

/// Compute the DE-9IM matrix of two valid geometries.
pub fn de9im(g1: &Geometry, g2: &Geometry) -> Result<De9imMatrix, KernelError> {
    let b1 = g1.mbb();
    let b2 = g2.mbb();
    if !boxes_interact(&b1, &b2) {
        return Ok(disjoint_matrix(g1, g2));
    }

    let d1 = Decomp::of(g1);
    let d2 = Decomp::of(g2);

    let mut events: Vec<Point> = Vec::new();
    events.extend_from_slice(&d1.vertices);
    events.extend_from_slice(&d2.vertices);
    collect_pair_events(&mut events, &d1.segs, &d2.segs)?;
    collect_self_events(&mut events, &d1.segs)?;
    collect_self_events(&mut events, &d2.segs)?;
    let events = dedup_points(events);

    let mut present = [[false; 3]; 3];
    let mut onedim = [[false; 3]; 3];
    let mut tally = |p: Point, is_mid: bool| {
        let r = classify(p, g1).index();
        let c = classify(p, g2).index();
        present[r][c] = true;
        if is_mid {
            onedim[r][c] = true;
        }
    };

    for e in &events {
        tally(*e, false);
    }
    let all_segs: Vec<(Point, Point)> = d1.segs.iter().chain(d2.segs.iter()).copied().collect();
    let isolated: Vec<Point> = d1
        .isolated
        .iter()
        .chain(d2.isolated.iter())
        .copied()
        .collect();
    for seg in &all_segs {
        for mid in sub_segment_midpoints(*seg, &events) {
            tally(mid, true);
            // Side probes: the class pair is constant on each side of the
            // sub-segment within the clearance radius, so one honest sample
            // per side witnesses the bordering open regions.
            if let Some((p, q)) = side_probes(*seg, mid, &all_segs, &isolated) {
                tally(p, false);
                tally(q, false);
            }
        }
    }
    for rep in d1.area_reps.iter().chain(d2.area_reps.iter()) {
        tally(*rep, false);
    }

    let mut entries = [[-1i8; 3]; 3];
    for row in SPACES {
        for col in SPACES {
            entries[row as usize][col as usize] = entry_dim(row, col, &d1, &d2, &present, &onedim);
        }
    }
    Ok(De9imMatrix::from_entries(entries))
}

fn boxes_interact(a: &Mbb, b: &Mbb) -> bool {
    a.lon_min <= b.lon_max + EPS
        && b.lon_min <= a.lon_max + EPS
        && a.lat_min <= b.lat_max + EPS
        && b.lat_min <= a.lat_max + EPS
}

/// Matrix of two geometries known to be spatially separated.
fn disjoint_matrix(g1: &Geometry, g2: &Geometry) -> De9imMatrix {
    let (d1, bd1) = (g1.dimension(), g1.boundary_dimension());
    let (d2, bd2) = (g2.dimension(), g2.boundary_dimension());
    De9imMatrix::from_entries([[-1, -1, d1], [-1, -1, bd1], [d2, bd2, 2]])
}

fn collect_pair_events(
    events: &mut Vec<Point>,
    segs1: &[(Point, Point)],
    segs2: &[(Point, Point)],
) -> Result<(), KernelError> {
    for &(a, b) in segs1 {
        for &(c, d) in segs2 {
            if seg_boxes_apart(a, b, c, d) {
                continue;
            }
            push_events(events, seg_seg_events(a, b, c, d))?;
        }
    }
    Ok(())
}

fn collect_self_events(
    events: &mut Vec<Point>,
    segs: &[(Point, Point)],
) -> Result<(), KernelError> {
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = segs[i];
            let (c, d) = segs[j];
            if seg_boxes_apart(a, b, c, d) {
                continue;
            }
            push_events(events, seg_seg_events(a, b, c, d))?;
        }
    }
    Ok(())
}

fn seg_boxes_apart(a: Point, b: Point, c: Point, d: Point) -> bool {
    a.lon.min(b.lon) > c.lon.max(d.lon) + EPS
        || c.lon.min(d.lon) > a.lon.max(b.lon) + EPS
        || a.lat.min(b.lat) > c.lat.max(d.lat) + EPS
        || c.lat.min(d.lat) > a.lat.max(b.lat) + EPS
}

fn push_events(events: &mut Vec<Point>, ev: SegEvents) -> Result<(), KernelError> {
    let mut push = |p: Point| {
        if !p.lon.is_finite() || !p.lat.is_finite() {
            return Err(KernelError::NumericalDegeneracy(
                "non-finite intersection point".into(),
            ));
        }
        events.push(p);
        Ok(())
    };
    match ev {
        SegEvents::None => Ok(()),
        SegEvents::Point(p) => push(p),
        SegEvents::Overlap(p, q) => {
            push(p)?;
            push(q)
        }
    }
}

fn dedup_points(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| {
        a.lon
            .partial_cmp(&b.lon)
            .unwrap()
            .then(a.lat.partial_cmp(&b.lat).unwrap())
    });
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        let dup = out
            .iter()
            .rev()
            .take_while(|q| p.lon - q.lon <= EPS)
            .any(|q| p.close_to(q, EPS));
        if !dup {
            out.push(p);
        }
    }
    out
}

/// Midpoints of the pieces a segment is cut into by the event points on it.
/// A piece shorter than the snapping scale contributes no witness.
fn sub_segment_midpoints(seg: (Point, Point), events: &[Point]) -> Vec<Point> {
    let (a, b) = seg;
    let (rx, ry) = (b.lon - a.lon, b.lat - a.lat);
    let len = (rx * rx + ry * ry).sqrt();
    if len <= 4.0 * EPS {
        return Vec::new();
    }
    let eps_t = EPS / len;
    let mut ts = vec![0.0, 1.0];
    for e in events {
        if point_on_segment(*e, a, b) {
            let t = (((e.lon - a.lon) * rx + (e.lat - a.lat) * ry) / (len * len)).clamp(0.0, 1.0);
            if t > eps_t && t < 1.0 - eps_t {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup_by(|x, y| (*x - *y).abs() <= eps_t);
    ts.windows(2)
        .filter(|w| (w[1] - w[0]) * len > 4.0 * EPS)
        .map(|w| param_point(a, rx, ry, (w[0] + w[1]) / 2.0))
        .collect()
}

/// Maximum possible dimension of a class of a geometry; -1 when the set is
/// empty (boundary of points, boundary of closed lines).
fn class_cap(class: Space, d: &Decomp) -> i8 {
    match class {
        Space::Interior => d.dim,
        Space::Boundary => d.boundary_dim,
        Space::Exterior => 2,
    }
}

fn entry_dim(
    row: Space,
    col: Space,
    d1: &Decomp,
    d2: &Decomp,
    present: &[[bool; 3]; 3],
    onedim: &[[bool; 3]; 3],
) -> i8 {
    if row == Space::Exterior && col == Space::Exterior {
        // Exteriors of bounded geometries always share the far plane.
        return 2;
    }
    let cap1 = class_cap(row, d1);
    let cap2 = class_cap(col, d2);
    if cap1 < 0 || cap2 < 0 {
        return -1;
    }
    let cap = cap1.min(cap2);
    let r = row as usize;
    let c = col as usize;
    if !present[r][c] {
        return -1;
    }
    match cap {
        // Both classes are open sets, so any common point implies an open
        // patch in the intersection.
        2 => 2,
        1 if onedim[r][c] => 1,
        _ => 0,
    }
}
