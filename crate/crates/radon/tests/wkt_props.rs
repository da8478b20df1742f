//! Generative properties: WKT round-tripping, bounding-box tightness, and
//! loader/parser totality on arbitrary input.

use proptest::prelude::*;

use radon::dataset::Role;
use radon::geom::{parse_wkt, Geometry, LineString, Point, Polygon, Ring};
use radon::io;

fn coord() -> impl Strategy<Value = (f64, f64)> {
    ((-180.0f64..=180.0), (-90.0f64..=90.0))
}

fn point() -> impl Strategy<Value = Point> {
    coord().prop_map(|(lon, lat)| Point::new(lon, lat).unwrap())
}

fn linestring() -> impl Strategy<Value = LineString> {
    prop::collection::vec(point(), 2..8)
        .prop_filter_map("valid linestring", |pts| LineString::new(pts).ok())
}

fn polygon() -> impl Strategy<Value = Polygon> {
    let center = ((-170.0f64..=170.0), (-80.0f64..=80.0));
    let spokes = prop::collection::vec((0.0f64..std::f64::consts::TAU, 0.1f64..4.0), 3..9);
    (center, spokes).prop_filter_map("valid ring", |((cx, cy), mut spokes)| {
        spokes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        spokes.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-3);
        if spokes.len() < 3 {
            return None;
        }
        let mut pts: Vec<Point> = spokes
            .iter()
            .map(|&(ang, r)| {
                Point::new(
                    (cx + r * ang.cos()).clamp(-180.0, 180.0),
                    (cy + r * ang.sin()).clamp(-90.0, 90.0),
                )
                .unwrap()
            })
            .collect();
        pts.push(pts[0]);
        Ring::new(pts).ok().map(|ring| Polygon::new(ring, vec![]))
    })
}

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![
        point().prop_map(Geometry::Point),
        linestring().prop_map(Geometry::LineString),
        polygon().prop_map(Geometry::Polygon),
        prop::collection::vec(point(), 1..5).prop_map(|ps| Geometry::multi_point(ps).unwrap()),
        prop::collection::vec(linestring(), 1..4)
            .prop_map(|ls| Geometry::multi_line_string(ls).unwrap()),
        prop::collection::vec(polygon(), 1..4).prop_map(|ps| Geometry::multi_polygon(ps).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wkt_round_trip_is_structural_identity(g in geometry()) {
        let text = g.to_wkt();
        let back = parse_wkt(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn mbb_is_the_tight_vertex_bound(g in geometry()) {
        let b = g.mbb();
        let vertices = g.vertices();
        for v in &vertices {
            prop_assert!(b.lon_min <= v.lon && v.lon <= b.lon_max);
            prop_assert!(b.lat_min <= v.lat && v.lat <= b.lat_max);
        }
        // Tightness: every edge of the box touches some vertex.
        prop_assert!(vertices.iter().any(|v| v.lon == b.lon_min));
        prop_assert!(vertices.iter().any(|v| v.lon == b.lon_max));
        prop_assert!(vertices.iter().any(|v| v.lat == b.lat_min));
        prop_assert!(vertices.iter().any(|v| v.lat == b.lat_max));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parser_is_total(text in ".{0,200}") {
        // Any input yields a geometry or a typed error, never a panic.
        let _ = parse_wkt(&text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn loaders_survive_arbitrary_lines(lines in prop::collection::vec(".{0,120}", 0..12)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fuzz.tsv");
        std::fs::write(&path, lines.join("\n")).unwrap();
        match io::load_delimited(&path, Role::Source, '\t') {
            Ok((d, _)) => prop_assert!(!d.is_empty()),
            Err(io::IoError::EmptyDataset { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error class: {e}"),
        }
        let path = dir.path().join("fuzz.nt");
        std::fs::write(&path, lines.join("\n")).unwrap();
        match io::load_ntriples(&path, Role::Source, io::GEO_WKT_PREDICATE) {
            Ok((d, _)) => prop_assert!(!d.is_empty()),
            Err(io::IoError::EmptyDataset { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error class: {e}"),
        }
    }
}
