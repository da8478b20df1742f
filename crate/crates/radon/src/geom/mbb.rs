use super::{Point, EPS};

/// Minimum bounding box: the tight axis-aligned rectangle around a geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mbb {
    pub lon_min: f64,
    pub lat_min: f64,
    pub lon_max: f64,
    pub lat_max: f64,
}

impl Mbb {
    pub fn of_points(points: &[Point]) -> Option<Mbb> {
        let first = points.first()?;
        let mut b = Mbb {
            lon_min: first.lon,
            lat_min: first.lat,
            lon_max: first.lon,
            lat_max: first.lat,
        };
        for p in &points[1..] {
            b.lon_min = b.lon_min.min(p.lon);
            b.lat_min = b.lat_min.min(p.lat);
            b.lon_max = b.lon_max.max(p.lon);
            b.lat_max = b.lat_max.max(p.lat);
        }
        Some(b)
    }

    pub fn lon_extent(&self) -> f64 {
        self.lon_max - self.lon_min
    }

    pub fn lat_extent(&self) -> f64 {
        self.lat_max - self.lat_min
    }

    pub fn intersects(&self, other: &Mbb) -> bool {
        self.lon_min <= other.lon_max
            && other.lon_min <= self.lon_max
            && self.lat_min <= other.lat_max
            && other.lat_min <= self.lat_max
    }

    /// `other` lies inside `self`, with EPS slack so that shared borders count.
    pub fn contains(&self, other: &Mbb) -> bool {
        self.lon_min <= other.lon_min + EPS
            && self.lat_min <= other.lat_min + EPS
            && self.lon_max >= other.lon_max - EPS
            && self.lat_max >= other.lat_max - EPS
    }

    /// All four corner coordinates coincide within EPS.
    pub fn coincides(&self, other: &Mbb) -> bool {
        (self.lon_min - other.lon_min).abs() <= EPS
            && (self.lat_min - other.lat_min).abs() <= EPS
            && (self.lon_max - other.lon_max).abs() <= EPS
            && (self.lat_max - other.lat_max).abs() <= EPS
    }

    pub fn union(&self, other: &Mbb) -> Mbb {
        Mbb {
            lon_min: self.lon_min.min(other.lon_min),
            lat_min: self.lat_min.min(other.lat_min),
            lon_max: self.lon_max.max(other.lon_max),
            lat_max: self.lat_max.max(other.lat_max),
        }
    }
}
