//! Space tiling: estimated-total-hypervolume swapping, granularity
//! selection, cell mapping of bounding boxes, antimeridian splitting, and
//! the two-phase sparse tile index.

use std::collections::BTreeMap;
use std::str::FromStr;

use log::warn;
use thiserror::Error;

use crate::dataset::Dataset;
use crate::geom::{Geometry, LineString, Mbb, Point, Polygon, Ring, EPS};
use crate::relation::Relation;

/// Estimated total hypervolume: dataset size times the product over both
/// axes of the mean bounding-box extent.
pub fn eth(d: &Dataset) -> f64 {
    let n = d.len() as f64;
    let (mut lon_sum, mut lat_sum) = (0.0, 0.0);
    for r in d.resources() {
        lon_sum += r.mbb.lon_extent();
        lat_sum += r.mbb.lat_extent();
    }
    n * (lon_sum / n) * (lat_sum / n)
}

/// Which dataset to index first. When the target's ETH is strictly smaller,
/// the datasets swap roles and the reverse relation is computed instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapPlan {
    pub swapped: bool,
    pub relation: Relation,
}

pub fn plan_swap(s: &Dataset, t: &Dataset, r: Relation) -> SwapPlan {
    if eth(t) < eth(s) {
        SwapPlan {
            swapped: true,
            relation: r.reverse(),
        }
    } else {
        SwapPlan {
            swapped: false,
            relation: r,
        }
    }
}

/// Per-dataset statistic applied to the per-geometry extents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Heuristic {
    Min,
    Max,
    Avg,
    Median,
    Fixed(f64),
}

impl FromStr for Heuristic {
    type Err = BadHeuristic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(Heuristic::Min),
            "max" => Ok(Heuristic::Max),
            "avg" => Ok(Heuristic::Avg),
            "median" => Ok(Heuristic::Median),
            other => {
                if let Some(v) = other.strip_prefix("fixed:") {
                    let v: f64 = v.parse().map_err(|_| BadHeuristic(s.to_string()))?;
                    if v.is_finite() && v > 0.0 {
                        return Ok(Heuristic::Fixed(v));
                    }
                }
                Err(BadHeuristic(s.to_string()))
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error(
    "bad granularity heuristic {0:?}; expected min | max | avg | median | fixed:<positive decimal>"
)]
pub struct BadHeuristic(pub String);

/// How the per-dimension statistic turns into a granularity factor:
/// `Literal` uses the averaged extent itself, `Reciprocal` its inverse.
/// The mapping is identical under either mode; only cell sizes differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    Literal,
    Reciprocal,
}

impl FromStr for DeltaMode {
    type Err = BadDeltaMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(DeltaMode::Literal),
            "reciprocal" => Ok(DeltaMode::Reciprocal),
            other => Err(BadDeltaMode(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("bad delta mode {0:?}; expected literal | reciprocal")]
pub struct BadDeltaMode(pub String);

/// Per-degree cell counts along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Granularity {
    pub delta_lon: f64,
    pub delta_lat: f64,
}

/// Per axis: apply the statistic to each dataset's extents, average the two
/// values, then apply the delta mode. All-zero extents (pure point data)
/// fall back to a granularity of 1.
pub fn select_granularity(
    s: &Dataset,
    t: &Dataset,
    heuristic: Heuristic,
    mode: DeltaMode,
) -> Granularity {
    if let Heuristic::Fixed(v) = heuristic {
        return Granularity {
            delta_lon: v,
            delta_lat: v,
        };
    }
    let axis = |extent: fn(&Mbb) -> f64| {
        let h_s = statistic(heuristic, s, extent);
        let h_t = statistic(heuristic, t, extent);
        let raw = (h_s + h_t) / 2.0;
        let delta = match mode {
            DeltaMode::Literal => raw,
            DeltaMode::Reciprocal => 1.0 / raw,
        };
        if delta.is_finite() && delta > 0.0 {
            delta
        } else {
            warn!("granularity degenerated to {delta}; falling back to 1");
            1.0
        }
    };
    Granularity {
        delta_lon: axis(Mbb::lon_extent),
        delta_lat: axis(Mbb::lat_extent),
    }
}

fn statistic(h: Heuristic, d: &Dataset, extent: fn(&Mbb) -> f64) -> f64 {
    // Antimeridian-split geometries enter the index piece by piece, so the
    // piece boxes are what the extent statistics describe.
    let mut values: Vec<f64> = d
        .resources()
        .iter()
        .flat_map(|r| r.index_boxes.iter().map(extent))
        .collect();
    match h {
        Heuristic::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        Heuristic::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Heuristic::Avg => values.iter().sum::<f64>() / values.len() as f64,
        Heuristic::Median => {
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite extents"));
            let n = values.len();
            if n % 2 == 1 {
                values[n / 2]
            } else {
                (values[n / 2 - 1] + values[n / 2]) / 2.0
            }
        }
        Heuristic::Fixed(v) => v,
    }
}

/// Integer grid cell address; `i` runs along the longitude axis, `j`
/// along the latitude axis. Negative indices address the western and
/// southern hemispheres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex {
    pub i: i64,
    pub j: i64,
}

/// Inclusive index rectangle covered by a bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRect {
    pub i_min: i64,
    pub i_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

impl CellRect {
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (self.i_min..=self.i_max)
            .flat_map(move |i| (self.j_min..=self.j_max).map(move |j| CellIndex { i, j }))
    }

    pub fn intersection(&self, other: &CellRect) -> Option<CellRect> {
        let r = CellRect {
            i_min: self.i_min.max(other.i_min),
            i_max: self.i_max.min(other.i_max),
            j_min: self.j_min.max(other.j_min),
            j_max: self.j_max.min(other.j_max),
        };
        (r.i_min <= r.i_max && r.j_min <= r.j_max).then_some(r)
    }
}

/// Index range of a bounding box: floor of the low corner to ceiling of the
/// high corner, inclusive on both ends. A box edge sitting exactly on a
/// cell border therefore lands in both adjacent cells; the link generator's
/// deduplication absorbs the repeats.
pub fn cell_range(b: &Mbb, g: &Granularity) -> CellRect {
    let idx = |x: f64| x.clamp(-1e15, 1e15) as i64;
    CellRect {
        i_min: idx((b.lon_min * g.delta_lon).floor()),
        i_max: idx((b.lon_max * g.delta_lon).ceil()),
        j_min: idx((b.lat_min * g.delta_lat).floor()),
        j_max: idx((b.lat_max * g.delta_lat).ceil()),
    }
}

/// All cells covered by a bounding box.
pub fn tile_cells(b: &Mbb, g: &Granularity) -> Vec<CellIndex> {
    cell_range(b, g).cells().collect()
}

/// Two-phase sparse index. Phase one inserts every source geometry into all
/// cells its boxes cover; phase two inserts a target geometry only into
/// cells already holding sources, so the target key set is a subset of the
/// source key set. Resources are addressed by their position in the
/// respective dataset.
#[derive(Debug)]
pub struct SparseTileIndex {
    source_cells: BTreeMap<CellIndex, Vec<u32>>,
    target_cells: BTreeMap<CellIndex, Vec<u32>>,
    source_footprints: Vec<Vec<CellRect>>,
    target_footprints: Vec<Vec<CellRect>>,
}

impl SparseTileIndex {
    pub fn source_cells(&self) -> &BTreeMap<CellIndex, Vec<u32>> {
        &self.source_cells
    }

    pub fn target_cells(&self) -> &BTreeMap<CellIndex, Vec<u32>> {
        &self.target_cells
    }

    /// Cells holding geometries from both sides, in ascending order.
    pub fn shared_cells(&self) -> Vec<CellIndex> {
        self.target_cells.keys().copied().collect()
    }

    pub fn source_footprint(&self, idx: u32) -> &[CellRect] {
        &self.source_footprints[idx as usize]
    }

    pub fn target_footprint(&self, idx: u32) -> &[CellRect] {
        &self.target_footprints[idx as usize]
    }

    /// The lexicographically smallest cell shared by the two footprints.
    /// Some cell is always shared when both appear in one populated cell.
    pub fn owner_cell(&self, source_idx: u32, target_idx: u32) -> Option<CellIndex> {
        let mut best: Option<CellIndex> = None;
        for rs in self.source_footprint(source_idx) {
            for rt in self.target_footprint(target_idx) {
                if let Some(r) = rs.intersection(rt) {
                    let cand = CellIndex {
                        i: r.i_min,
                        j: r.j_min,
                    };
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        best
    }
}

pub fn build_index(s: &Dataset, t: &Dataset, g: &Granularity) -> SparseTileIndex {
    let mut source_cells: BTreeMap<CellIndex, Vec<u32>> = BTreeMap::new();
    let mut source_footprints = Vec::with_capacity(s.len());
    for (idx, r) in s.resources().iter().enumerate() {
        let rects: Vec<CellRect> = r.index_boxes.iter().map(|b| cell_range(b, g)).collect();
        for rect in &rects {
            for cell in rect.cells() {
                let bucket = source_cells.entry(cell).or_default();
                // Piece rectangles may overlap on shared borders.
                if bucket.last() != Some(&(idx as u32)) {
                    bucket.push(idx as u32);
                }
            }
        }
        source_footprints.push(rects);
    }

    let mut target_cells: BTreeMap<CellIndex, Vec<u32>> = BTreeMap::new();
    let mut target_footprints = Vec::with_capacity(t.len());
    for (idx, r) in t.resources().iter().enumerate() {
        let rects: Vec<CellRect> = r.index_boxes.iter().map(|b| cell_range(b, g)).collect();
        for rect in &rects {
            for cell in rect.cells() {
                if !source_cells.contains_key(&cell) {
                    continue;
                }
                let bucket = target_cells.entry(cell).or_default();
                if bucket.last() != Some(&(idx as u32)) {
                    bucket.push(idx as u32);
                }
            }
        }
        target_footprints.push(rects);
    }

    SparseTileIndex {
        source_cells,
        target_cells,
        source_footprints,
        target_footprints,
    }
}

/// Split a geometry at the ±180° meridian. A segment whose endpoints are
/// more than 180° of longitude apart is read as passing over the
/// antimeridian; such geometries come back as one piece per side. Anything
/// else (including degenerate cases the splitter cannot stitch, such as
/// rings winding around a pole) is returned unchanged.
pub fn split_antimeridian(g: &Geometry) -> Vec<Geometry> {
    if !wraps(g) {
        return vec![g.clone()];
    }
    let split = match g {
        Geometry::Point(_) | Geometry::MultiPoint(_) => None,
        Geometry::LineString(l) => split_lines(std::slice::from_ref(l)),
        Geometry::MultiLineString(ls) => split_lines(ls),
        Geometry::Polygon(p) => split_polygons(std::slice::from_ref(p)),
        Geometry::MultiPolygon(ps) => split_polygons(ps),
    };
    split.unwrap_or_else(|| vec![g.clone()])
}

fn wraps(g: &Geometry) -> bool {
    let seq_wraps = |pts: &[Point]| pts.windows(2).any(|w| (w[1].lon - w[0].lon).abs() > 180.0);
    match g {
        Geometry::Point(_) | Geometry::MultiPoint(_) => false,
        Geometry::LineString(l) => seq_wraps(l.points()),
        Geometry::MultiLineString(ls) => ls.iter().any(|l| seq_wraps(l.points())),
        Geometry::Polygon(p) => p.rings().any(|r| seq_wraps(r.points())),
        Geometry::MultiPolygon(ps) => ps.iter().any(|p| p.rings().any(|r| seq_wraps(r.points()))),
    }
}

/// Continuous unwrapped coordinates: each jump over the antimeridian shifts
/// the running offset by a full turn.
fn unwrap_seq(pts: &[Point]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(pts.len());
    let mut offset = 0.0;
    let mut prev = pts[0].lon;
    out.push((pts[0].lon, pts[0].lat));
    for p in &pts[1..] {
        let d = p.lon - prev;
        if d > 180.0 {
            offset -= 360.0;
        } else if d < -180.0 {
            offset += 360.0;
        }
        out.push((p.lon + offset, p.lat));
        prev = p.lon;
    }
    out
}

/// Band of an unwrapped longitude: 0 is the plain [-180, 180] map, ±1 its
/// unwrapped continuations.
fn band_of(lon: f64) -> i32 {
    if lon > 180.0 + EPS {
        1
    } else if lon < -180.0 - EPS {
        -1
    } else {
        0
    }
}

fn shift_back(lon: f64, band: i32) -> f64 {
    (lon - 360.0 * band as f64).clamp(-180.0, 180.0)
}

fn split_lines(members: &[LineString]) -> Option<Vec<Geometry>> {
    let mut by_band: BTreeMap<i32, Vec<LineString>> = BTreeMap::new();
    for m in members {
        let raw = unwrap_seq(m.points());
        let mut piece: Vec<(f64, f64)> = vec![raw[0]];
        let mut piece_band = band_of(raw[0].0);
        let flush =
            |piece: &mut Vec<(f64, f64)>, band: i32, out: &mut BTreeMap<i32, Vec<LineString>>| {
                let pts: Vec<Point> = piece
                    .iter()
                    .map(|&(lon, lat)| Point::raw(shift_back(lon, band), lat))
                    .collect();
                if let Ok(l) = LineString::new(pts) {
                    out.entry(band).or_default().push(l);
                }
                piece.clear();
            };
        if raw.iter().any(|p| p.0.abs() > 540.0) {
            // More than one full wrap; leave the literal planar reading.
            return None;
        }
        for w in raw.windows(2) {
            let (a, b) = (w[0], w[1]);
            let bb = band_of(b.0);
            if bb == piece_band || band_of_boundary(b.0, piece_band) {
                piece.push(b);
                continue;
            }
            // Crossing a cut meridian: split the segment there.
            let cut = if b.0 > a.0 {
                180.0 + 360.0 * piece_band as f64
            } else {
                -180.0 + 360.0 * piece_band as f64
            };
            let t = (cut - a.0) / (b.0 - a.0);
            let lat = a.1 + t * (b.1 - a.1);
            piece.push((cut, lat));
            flush(&mut piece, piece_band, &mut by_band);
            piece.push((cut, lat));
            piece.push(b);
            piece_band = bb;
        }
        flush(&mut piece, piece_band, &mut by_band);
    }
    if by_band.is_empty() {
        return None;
    }
    Some(
        by_band
            .into_values()
            .map(|mut ls| {
                if ls.len() == 1 {
                    Geometry::LineString(ls.pop().unwrap())
                } else {
                    Geometry::MultiLineString(ls)
                }
            })
            .collect(),
    )
}

/// A band-0 piece may contain points exactly on its border meridians.
fn band_of_boundary(lon: f64, band: i32) -> bool {
    let lo = -180.0 + 360.0 * band as f64;
    let hi = 180.0 + 360.0 * band as f64;
    (lon - lo).abs() <= EPS || (lon - hi).abs() <= EPS
}

fn split_polygons(members: &[Polygon]) -> Option<Vec<Geometry>> {
    let mut by_band: BTreeMap<i32, Vec<Vec<Point>>> = BTreeMap::new();
    for m in members {
        let shell = unwrap_ring(m.exterior())?;
        let shell_mid = ring_mid(&shell);
        let mut rings = vec![shell];
        for hole in m.holes() {
            let mut h = unwrap_ring(hole)?;
            // Align the hole with the unwrapped shell.
            let mid = ring_mid(&h);
            let k = ((shell_mid - mid) / 360.0).round();
            for p in &mut h {
                p.0 += 360.0 * k;
            }
            rings.push(h);
        }
        if rings.iter().any(|r| r.iter().any(|p| p.0.abs() > 540.0)) {
            return None;
        }
        // Cut every ring at both meridians; afterwards each piece lies in
        // exactly one band.
        for cut in [-180.0, 180.0] {
            let mut next = Vec::new();
            for ring in rings {
                let (min, max) = ring
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                        (lo.min(p.0), hi.max(p.0))
                    });
                if min >= cut - EPS || max <= cut + EPS {
                    next.push(ring);
                } else {
                    let (lo, hi) = split_ring(&ring, cut)?;
                    next.extend(lo);
                    next.extend(hi);
                }
            }
            rings = next;
        }
        for ring in rings {
            let band = band_of(ring_mid(&ring));
            let pts: Vec<Point> = ring
                .into_iter()
                .map(|(lon, lat)| Point::raw(shift_back(lon, band), lat))
                .collect();
            by_band.entry(band).or_default().push(pts);
        }
    }
    let mut out = Vec::new();
    for (_, ring_sets) in by_band {
        let mut rings = Vec::new();
        for pts in ring_sets {
            rings.push(Ring::new(pts).ok()?);
        }
        // Even-odd semantics make the shell/hole assignment immaterial;
        // take the largest ring as the exterior.
        rings.sort_by(|a, b| {
            b.signed_area()
                .abs()
                .partial_cmp(&a.signed_area().abs())
                .unwrap()
        });
        let mut it = rings.into_iter();
        let exterior = it.next()?;
        out.push(Geometry::Polygon(Polygon::new(exterior, it.collect())));
    }
    (!out.is_empty()).then_some(out)
}

fn unwrap_ring(r: &Ring) -> Option<Vec<(f64, f64)>> {
    let raw = unwrap_seq(r.points());
    // A ring that does not close after unwrapping winds around a pole.
    let (first, last) = (raw[0], raw[raw.len() - 1]);
    ((first.0 - last.0).abs() <= EPS).then_some(raw)
}

fn ring_mid(r: &[(f64, f64)]) -> f64 {
    let (min, max) = r
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    (min + max) / 2.0
}

/// Split a simple unwrapped ring at a vertical line by chain stitching:
/// cut the cycle at its transversal crossings, pair the crossing points in
/// latitude order (the region's sections along the line), and reconnect
/// the side chains through those sections. Tangential contacts make the
/// pairing ambiguous and yield None.
#[allow(clippy::type_complexity)]
fn split_ring(
    ring: &[(f64, f64)],
    cut: f64,
) -> Option<(Vec<Vec<(f64, f64)>>, Vec<Vec<(f64, f64)>>)> {
    // Open cycle with crossing vertices inserted and near-cut snapped.
    let mut cycle: Vec<(f64, f64)> = Vec::new();
    let closed = &ring[..ring.len() - 1];
    let n = closed.len();
    for k in 0..n {
        let a = closed[k];
        let b = closed[(k + 1) % n];
        let snap = |p: (f64, f64)| {
            if (p.0 - cut).abs() <= EPS {
                (cut, p.1)
            } else {
                p
            }
        };
        let (a, b) = (snap(a), snap(b));
        cycle.push(a);
        if (a.0 < cut) != (b.0 < cut) && a.0 != cut && b.0 != cut {
            let t = (cut - a.0) / (b.0 - a.0);
            cycle.push((cut, a.1 + t * (b.1 - a.1)));
        }
    }
    let n = cycle.len();
    let side = |p: (f64, f64)| -> i8 {
        if p.0 == cut {
            0
        } else if p.0 < cut {
            -1
        } else {
            1
        }
    };
    // Transversal crossings only: an on-line vertex whose neighbours sit
    // strictly on opposite sides.
    let mut crossings = Vec::new();
    for k in 0..n {
        if side(cycle[k]) != 0 {
            continue;
        }
        let prev = side(cycle[(k + n - 1) % n]);
        let next = side(cycle[(k + 1) % n]);
        if prev == 0 || next == 0 || prev == next {
            return None;
        }
        crossings.push(k);
    }
    if crossings.is_empty() || crossings.len() % 2 != 0 {
        return None;
    }

    // Arcs between consecutive crossings, each wholly on one side.
    struct Arc {
        pts: Vec<(f64, f64)>,
        used: bool,
    }
    let mut arcs: Vec<Arc> = Vec::new();
    let m = crossings.len();
    for c in 0..m {
        let start = crossings[c];
        let end = crossings[(c + 1) % m];
        let mut pts = vec![cycle[start]];
        let mut k = (start + 1) % n;
        while k != end {
            pts.push(cycle[k]);
            k = (k + 1) % n;
        }
        pts.push(cycle[end]);
        arcs.push(Arc { pts, used: false });
    }

    // Pair the crossing points along the line in latitude order.
    let mut lats: Vec<f64> = crossings.iter().map(|&k| cycle[k].1).collect();
    lats.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lats.dedup_by(|a, b| (*a - *b).abs() <= EPS);
    if lats.len() != m {
        return None;
    }
    let partner = |lat: f64| -> Option<f64> {
        let pos = lats.iter().position(|&l| (l - lat).abs() <= EPS)?;
        Some(if pos % 2 == 0 {
            lats[pos + 1]
        } else {
            lats[pos - 1]
        })
    };

    let arc_side = |arc: &Arc| -> i8 {
        for p in &arc.pts {
            if side(*p) != 0 {
                return side(*p);
            }
        }
        0
    };

    let mut west = Vec::new();
    let mut east = Vec::new();
    for start in 0..arcs.len() {
        if arcs[start].used || arc_side(&arcs[start]) == 0 {
            continue;
        }
        let s = arc_side(&arcs[start]);
        let mut out: Vec<(f64, f64)> = arcs[start].pts.clone();
        arcs[start].used = true;
        loop {
            let tail = *out.last().unwrap();
            if (tail.1 - out[0].1).abs() <= EPS && out.len() > 2 && tail.0 == cut && out[0].0 == cut
            {
                break;
            }
            let want = partner(tail.1)?;
            if (want - out[0].1).abs() <= EPS {
                out.push(out[0]);
                break;
            }
            // Continue with the unused same-side arc touching that point.
            let next = arcs.iter().position(|a| {
                !a.used
                    && arc_side(a) == s
                    && ((a.pts[0].1 - want).abs() <= EPS && a.pts[0].0 == cut
                        || (a.pts[a.pts.len() - 1].1 - want).abs() <= EPS
                            && a.pts[a.pts.len() - 1].0 == cut)
            })?;
            let arc = &mut arcs[next];
            arc.used = true;
            if (arc.pts[0].1 - want).abs() <= EPS && arc.pts[0].0 == cut {
                out.extend(arc.pts.iter().copied());
            } else {
                out.extend(arc.pts.iter().rev().copied());
            }
        }
        if s < 0 {
            west.push(out);
        } else {
            east.push(out);
        }
    }
    if arcs.iter().any(|a| !a.used && arc_side(a) != 0) {
        return None;
    }
    Some((west, east))
}
