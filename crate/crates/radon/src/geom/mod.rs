//! Planar geometry model: points, lines and polygons in lon/lat degrees,
//! WKT parsing/serialization, bounding boxes and the DE-9IM kernel.
//!
//! Coordinates are interpreted as plain 2-D Cartesian values (equirectangular
//! reading of lon/lat). The axis order is always `lon lat`.

mod de9im;
mod kernel;
mod mbb;
mod wkt;

pub use de9im::{De9imMatrix, MaskError, Space};
pub use kernel::{classify, de9im, Class, KernelError};
pub use mbb::Mbb;
pub use wkt::{parse_wkt, WktError};

use thiserror::Error;

/// True iff the DE-9IM matrix of the pair satisfies the 9-symbol mask.
pub fn relate(g1: &Geometry, g2: &Geometry, mask: &str) -> Result<bool, RelateError> {
    let matrix = de9im(g1, g2)?;
    Ok(matrix.matches(mask)?)
}

#[derive(Debug, Error, PartialEq)]
pub enum RelateError {
    #[error(transparent)]
    InvalidMask(#[from] MaskError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Absolute snapping tolerance, in degrees, for all coincidence tests
/// (point-on-point, point-on-segment, collinearity). Single constant for
/// the whole crate.
pub const EPS: f64 = 1e-12;

/// A position in degrees, `lon` in [-180, 180], `lat` in [-90, 90].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub lon: f64,
    pub lat: f64,
}

impl Point {
    pub fn new(lon: f64, lat: f64) -> Result<Self, GeometryError> {
        if !lon.is_finite() || !lat.is_finite() {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        if !(-180.0..=180.0).contains(&lon) || !(-90.0..=90.0).contains(&lat) {
            return Err(GeometryError::CoordinateOutOfRange { lon, lat });
        }
        Ok(Point { lon, lat })
    }

    /// Constructor for coordinates already known to be valid.
    pub(crate) fn raw(lon: f64, lat: f64) -> Self {
        Point { lon, lat }
    }

    pub fn close_to(&self, other: &Point, eps: f64) -> bool {
        (self.lon - other.lon).abs() <= eps && (self.lat - other.lat).abs() <= eps
    }
}

/// An ordered point sequence with at least two distinct vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LineString {
    points: Vec<Point>,
}

impl LineString {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        let points = dedup_consecutive(points);
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints {
                kind: "LineString",
                min: 2,
                got: points.len(),
            });
        }
        Ok(LineString { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// First point coincides with the last one.
    pub fn is_closed(&self) -> bool {
        self.points
            .first()
            .zip(self.points.last())
            .is_some_and(|(a, b)| a.close_to(b, EPS))
    }
}

/// A closed, simple (non-self-intersecting) ring with nonzero area.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    points: Vec<Point>,
}

impl Ring {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        let mut points = dedup_consecutive(points);
        // Closure: accept first ≈ last and snap exactly.
        match (points.first().copied(), points.last().copied()) {
            (Some(first), Some(last)) if first.close_to(&last, EPS) => {
                *points.last_mut().unwrap() = first;
            }
            _ => return Err(GeometryError::OpenRing),
        }
        // After snapping, the closing vertex may duplicate its predecessor.
        while points.len() >= 2 && points[points.len() - 2].close_to(&points[points.len() - 1], EPS)
        {
            let last = points.pop().unwrap();
            *points.last_mut().unwrap() = last;
        }
        if points.len() < 4 {
            return Err(GeometryError::TooFewPoints {
                kind: "ring",
                min: 4,
                got: points.len(),
            });
        }
        let ring = Ring { points };
        ring.check_simple()?;
        Ok(ring)
    }

    /// Vertices, first = last.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Edges as (start, end) vertex pairs.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Shoelace formula; sign carries orientation.
    pub fn signed_area(&self) -> f64 {
        let mut acc = 0.0;
        for (a, b) in self.edges() {
            acc += a.lon * b.lat - b.lon * a.lat;
        }
        acc / 2.0
    }

    fn check_simple(&self) -> Result<(), GeometryError> {
        if self.signed_area().abs() <= EPS {
            return Err(GeometryError::DegenerateRing);
        }
        let edges: Vec<(Point, Point)> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                match kernel::seg_seg_events(a, b, c, d) {
                    kernel::SegEvents::None => {}
                    kernel::SegEvents::Point(p) => {
                        if !adjacent {
                            return Err(GeometryError::SelfIntersectingRing);
                        }
                        // Adjacent edges may only meet at their shared vertex.
                        let shared = if j == i + 1 { b } else { a };
                        if !p.close_to(&shared, EPS) {
                            return Err(GeometryError::SelfIntersectingRing);
                        }
                    }
                    kernel::SegEvents::Overlap(..) => {
                        return Err(GeometryError::SelfIntersectingRing)
                    }
                }
            }
        }
        Ok(())
    }
}

/// Area bounded by an exterior ring, minus interior rings (holes).
/// Interior membership follows the even-odd rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    exterior: Ring,
    holes: Vec<Ring>,
}

impl Polygon {
    pub fn new(exterior: Ring, holes: Vec<Ring>) -> Self {
        Polygon { exterior, holes }
    }

    pub fn exterior(&self) -> &Ring {
        &self.exterior
    }

    pub fn holes(&self) -> &[Ring] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        std::iter::once(&self.exterior).chain(self.holes.iter())
    }
}

/// The six supported OGC simple-feature kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Point),
    LineString(LineString),
    Polygon(Polygon),
    MultiPoint(Vec<Point>),
    MultiLineString(Vec<LineString>),
    MultiPolygon(Vec<Polygon>),
}

impl Geometry {
    pub fn multi_point(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyMulti("MultiPoint"));
        }
        Ok(Geometry::MultiPoint(points))
    }

    pub fn multi_line_string(lines: Vec<LineString>) -> Result<Self, GeometryError> {
        if lines.is_empty() {
            return Err(GeometryError::EmptyMulti("MultiLineString"));
        }
        Ok(Geometry::MultiLineString(lines))
    }

    pub fn multi_polygon(polys: Vec<Polygon>) -> Result<Self, GeometryError> {
        if polys.is_empty() {
            return Err(GeometryError::EmptyMulti("MultiPolygon"));
        }
        Ok(Geometry::MultiPolygon(polys))
    }

    /// Inherent dimension: 0 for points, 1 for lines, 2 for areas.
    pub fn dimension(&self) -> i8 {
        match self {
            Geometry::Point(_) | Geometry::MultiPoint(_) => 0,
            Geometry::LineString(_) | Geometry::MultiLineString(_) => 1,
            Geometry::Polygon(_) | Geometry::MultiPolygon(_) => 2,
        }
    }

    /// Dimension of the boundary point set: -1 when empty.
    ///
    /// A line endpoint only counts as boundary if no member's interior
    /// passes back through it, so closed and self-overlapping members
    /// contribute nothing.
    pub fn boundary_dimension(&self) -> i8 {
        let members: &[LineString] = match self {
            Geometry::Point(_) | Geometry::MultiPoint(_) => return -1,
            Geometry::Polygon(_) | Geometry::MultiPolygon(_) => return 1,
            Geometry::LineString(l) => std::slice::from_ref(l),
            Geometry::MultiLineString(ls) => ls,
        };
        let endpoint_on_boundary = members
            .iter()
            .filter(|m| !m.is_closed())
            .flat_map(|m| [*m.points().first().unwrap(), *m.points().last().unwrap()])
            .any(|e| kernel::classify(e, self) == kernel::Class::Boundary);
        if endpoint_on_boundary {
            0
        } else {
            -1
        }
    }

    /// All vertices, including isolated point members.
    pub fn vertices(&self) -> Vec<Point> {
        let mut out = Vec::new();
        match self {
            Geometry::Point(p) => out.push(*p),
            Geometry::MultiPoint(ps) => out.extend_from_slice(ps),
            Geometry::LineString(l) => out.extend_from_slice(l.points()),
            Geometry::MultiLineString(ls) => {
                for l in ls {
                    out.extend_from_slice(l.points());
                }
            }
            Geometry::Polygon(p) => {
                for r in p.rings() {
                    out.extend_from_slice(r.points());
                }
            }
            Geometry::MultiPolygon(ps) => {
                for p in ps {
                    for r in p.rings() {
                        out.extend_from_slice(r.points());
                    }
                }
            }
        }
        out
    }

    pub fn mbb(&self) -> Mbb {
        Mbb::of_points(&self.vertices()).expect("valid geometry has at least one vertex")
    }

    /// WKT serialization: upper-case tags, shortest round-trip decimals,
    /// `lon lat` axis order.
    pub fn to_wkt(&self) -> String {
        wkt::serialize(self)
    }
}

fn dedup_consecutive(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_some_and(|q| q.close_to(&p, EPS)) {
            continue;
        }
        out.push(p);
    }
    out
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is NaN or infinite")]
    NonFiniteCoordinate,
    #[error("coordinate out of range: lon {lon}, lat {lat}")]
    CoordinateOutOfRange { lon: f64, lat: f64 },
    #[error("{kind} needs at least {min} distinct points, got {got}")]
    TooFewPoints {
        kind: &'static str,
        min: usize,
        got: usize,
    },
    #[error("polygon ring is not closed")]
    OpenRing,
    #[error("polygon ring is self-intersecting")]
    SelfIntersectingRing,
    #[error("polygon ring has zero area")]
    DegenerateRing,
    #[error("{0} must have at least one member")]
    EmptyMulti(&'static str),
}
