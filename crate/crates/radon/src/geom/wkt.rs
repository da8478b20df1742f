//! Hand-rolled WKT reader/writer for the six supported simple-feature kinds.
//!
//! Parsing is total: any input yields a `Geometry` or a typed error, never a
//! panic. Serialization emits upper-case tags, shortest round-trip decimal
//! coordinates and `lon lat` axis order.

use thiserror::Error;

use super::{Geometry, GeometryError, LineString, Point, Polygon, Ring};

#[derive(Debug, Error, PartialEq)]
pub enum WktError {
    #[error("WKT syntax error at byte {at}: {detail}")]
    Syntax { at: usize, detail: String },
    #[error("unsupported WKT kind: {0}")]
    UnsupportedKind(String),
    #[error("invalid geometry: {0}")]
    Invalid(#[from] GeometryError),
}

pub fn parse_wkt(text: &str) -> Result<Geometry, WktError> {
    let mut p = Parser::new(text);
    let geom = p.geometry()?;
    p.expect_end()?;
    Ok(geom)
}

pub(super) fn serialize(g: &Geometry) -> String {
    let mut out = String::new();
    match g {
        Geometry::Point(p) => {
            out.push_str("POINT (");
            write_coord(&mut out, p);
            out.push(')');
        }
        Geometry::LineString(l) => {
            out.push_str("LINESTRING ");
            write_seq(&mut out, l.points());
        }
        Geometry::Polygon(p) => {
            out.push_str("POLYGON ");
            write_polygon(&mut out, p);
        }
        Geometry::MultiPoint(ps) => {
            out.push_str("MULTIPOINT (");
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push('(');
                write_coord(&mut out, p);
                out.push(')');
            }
            out.push(')');
        }
        Geometry::MultiLineString(ls) => {
            out.push_str("MULTILINESTRING (");
            for (i, l) in ls.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_seq(&mut out, l.points());
            }
            out.push(')');
        }
        Geometry::MultiPolygon(ps) => {
            out.push_str("MULTIPOLYGON (");
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_polygon(&mut out, p);
            }
            out.push(')');
        }
    }
    out
}

fn write_coord(out: &mut String, p: &Point) {
    out.push_str(&format!("{} {}", p.lon, p.lat));
}

fn write_seq(out: &mut String, points: &[Point]) {
    out.push('(');
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_coord(out, p);
    }
    out.push(')');
}

fn write_polygon(out: &mut String, p: &Polygon) {
    out.push('(');
    for (i, r) in p.rings().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_seq(out, r.points());
    }
    out.push(')');
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn geometry(&mut self) -> Result<Geometry, WktError> {
        let tag = self.ident()?;
        let upper = tag.to_ascii_uppercase();
        // Z / M / ZM suffixes announce extra dimensions we do not support.
        self.skip_ws();
        if let Some(modifier) = self.peek_ident() {
            let m = modifier.to_ascii_uppercase();
            if m == "Z" || m == "M" || m == "ZM" {
                return Err(WktError::UnsupportedKind(format!("{upper} {m}")));
            }
            if m == "EMPTY" {
                self.ident()?;
                return Err(WktError::Invalid(GeometryError::TooFewPoints {
                    kind: "geometry",
                    min: 1,
                    got: 0,
                }));
            }
        }
        match upper.as_str() {
            "POINT" => {
                self.expect(b'(')?;
                let p = self.coord()?;
                self.expect(b')')?;
                Ok(Geometry::Point(p))
            }
            "LINESTRING" => Ok(Geometry::LineString(self.line_body()?)),
            "POLYGON" => Ok(Geometry::Polygon(self.polygon_body()?)),
            "MULTIPOINT" => {
                self.expect(b'(')?;
                let mut points = Vec::new();
                loop {
                    // Both `(1 2)` and bare `1 2` member forms are valid WKT.
                    self.skip_ws();
                    if self.peek() == Some(b'(') {
                        self.expect(b'(')?;
                        points.push(self.coord()?);
                        self.expect(b')')?;
                    } else {
                        points.push(self.coord()?);
                    }
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b')')?;
                Ok(Geometry::multi_point(points)?)
            }
            "MULTILINESTRING" => {
                self.expect(b'(')?;
                let mut lines = Vec::new();
                loop {
                    lines.push(self.line_body()?);
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b')')?;
                Ok(Geometry::multi_line_string(lines)?)
            }
            "MULTIPOLYGON" => {
                self.expect(b'(')?;
                let mut polys = Vec::new();
                loop {
                    polys.push(self.polygon_body()?);
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b')')?;
                Ok(Geometry::multi_polygon(polys)?)
            }
            _ => Err(WktError::UnsupportedKind(upper)),
        }
    }

    fn line_body(&mut self) -> Result<LineString, WktError> {
        Ok(LineString::new(self.coord_seq()?)?)
    }

    fn polygon_body(&mut self) -> Result<Polygon, WktError> {
        self.expect(b'(')?;
        let mut rings = Vec::new();
        loop {
            rings.push(Ring::new(self.coord_seq()?)?);
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b')')?;
        let mut it = rings.into_iter();
        let exterior = it.next().expect("at least one ring parsed");
        Ok(Polygon::new(exterior, it.collect()))
    }

    fn coord_seq(&mut self) -> Result<Vec<Point>, WktError> {
        self.expect(b'(')?;
        let mut points = vec![self.coord()?];
        while self.eat(b',') {
            points.push(self.coord()?);
        }
        self.expect(b')')?;
        Ok(points)
    }

    fn coord(&mut self) -> Result<Point, WktError> {
        let lon = self.number()?;
        let lat = self.number()?;
        // A third number means a Z/M coordinate.
        self.skip_ws();
        if self
            .peek()
            .is_some_and(|b| b.is_ascii_digit() || b == b'-' || b == b'+' || b == b'.')
        {
            return Err(WktError::UnsupportedKind(
                "coordinates with more than 2 dimensions".into(),
            ));
        }
        Ok(Point::new(lon, lat)?)
    }

    fn number(&mut self) -> Result<f64, WktError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_digit() || matches!(b, b'-' | b'+' | b'.' | b'e' | b'E'))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        self.text[start..self.pos]
            .parse::<f64>()
            .map_err(|e| WktError::Syntax {
                at: start,
                detail: format!("bad number: {e}"),
            })
    }

    fn ident(&mut self) -> Result<&'a str, WktError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a geometry tag"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn peek_ident(&self) -> Option<&'a str> {
        let mut end = self.pos;
        while end < self.bytes.len() && self.bytes[end].is_ascii_alphabetic() {
            end += 1;
        }
        (end > self.pos).then(|| &self.text[self.pos..end])
    }

    fn expect(&mut self, b: u8) -> Result<(), WktError> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {:?}", b as char)))
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&mut self) -> Result<(), WktError> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.err("trailing characters after geometry"))
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, detail: &str) -> WktError {
        WktError::Syntax {
            at: self.pos,
            detail: detail.into(),
        }
    }
}
