//! Datasets of identified geometry resources.
//!
//! Construction canonicalizes geometries that pass over the antimeridian by
//! splitting them at ±180° (see [`crate::tiling::split_antimeridian`]), so
//! every downstream consumer (relation evaluation, bounding boxes, tiling)
//! sees one consistent planar form. The per-piece bounding boxes are kept
//! for index construction.

use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{Geometry, Mbb};
use crate::tiling::split_antimeridian;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Target,
}

#[derive(Debug, Clone)]
pub struct Resource {
    pub id: String,
    pub geometry: Geometry,
    pub mbb: Mbb,
    /// Bounding boxes of the antimeridian-split pieces; a single element
    /// equal to `mbb` for geometries that do not cross.
    pub index_boxes: Vec<Mbb>,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub role: Role,
    resources: Vec<Resource>,
}

impl Dataset {
    pub fn new(role: Role, items: Vec<(String, Geometry)>) -> Result<Dataset, DatasetError> {
        if items.is_empty() {
            return Err(DatasetError::Empty);
        }
        let mut seen: HashMap<String, ()> = HashMap::with_capacity(items.len());
        let mut resources = Vec::with_capacity(items.len());
        for (id, geometry) in items {
            if id.is_empty() {
                return Err(DatasetError::EmptyId);
            }
            if seen.insert(id.clone(), ()).is_some() {
                return Err(DatasetError::DuplicateId(id));
            }
            resources.push(Resource::new(id, geometry));
        }
        Ok(Dataset { role, resources })
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn len(&self) -> usize {
        self.resources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resources.is_empty()
    }
}

impl Resource {
    fn new(id: String, geometry: Geometry) -> Resource {
        let pieces = split_antimeridian(&geometry);
        let geometry = merge_pieces(pieces.clone()).unwrap_or(geometry);
        let index_boxes: Vec<Mbb> = pieces.iter().map(Geometry::mbb).collect();
        let mbb = geometry.mbb();
        Resource {
            id,
            geometry,
            mbb,
            index_boxes,
        }
    }
}

/// Combine split pieces back into a single geometry of the matching multi
/// kind. One piece stays as-is.
fn merge_pieces(pieces: Vec<Geometry>) -> Option<Geometry> {
    if pieces.len() == 1 {
        return pieces.into_iter().next();
    }
    let mut points = Vec::new();
    let mut lines = Vec::new();
    let mut polys = Vec::new();
    for piece in pieces {
        match piece {
            Geometry::Point(p) => points.push(p),
            Geometry::MultiPoint(ps) => points.extend(ps),
            Geometry::LineString(l) => lines.push(l),
            Geometry::MultiLineString(ls) => lines.extend(ls),
            Geometry::Polygon(p) => polys.push(p),
            Geometry::MultiPolygon(ps) => polys.extend(ps),
        }
    }
    match (points.is_empty(), lines.is_empty(), polys.is_empty()) {
        (false, true, true) => Geometry::multi_point(points).ok(),
        (true, false, true) => Geometry::multi_line_string(lines).ok(),
        (true, true, false) => Geometry::multi_polygon(polys).ok(),
        _ => None,
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("dataset has no resources")]
    Empty,
    #[error("resource id is empty")]
    EmptyId,
    #[error("duplicate resource id: {0}")]
    DuplicateId(String),
}
