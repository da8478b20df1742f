//! Dataset ingestion (N-Triples with WKT literals, delimited id/WKT files),
//! link output writers, and the flat stats report.
//!
//! Loading is total: no input line can abort ingestion. Every anomaly is
//! skipped and counted in the returned [`LoadStats`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use log::warn;
use thiserror::Error;

use crate::dataset::{Dataset, DatasetError, Role};
use crate::geom::parse_wkt;
use crate::linker::{Mapping, RunStats};
use crate::relation::Relation;

/// Default geometry predicate accepted from N-Triples input.
pub const GEO_WKT_PREDICATE: &str = "http://www.opengis.net/ont/geosparql#asWKT";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    /// Lines that are not a well-formed triple / delimited record.
    pub malformed_lines: u64,
    /// Records whose WKT failed to parse or validate.
    pub bad_wkt: u64,
    /// Records dropped because their id was already present (first wins).
    pub duplicate_ids: u64,
    /// WKT literals that carried a leading CRS IRI (accepted, CRS ignored).
    pub crs_stripped: u64,
    pub loaded: u64,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("no valid records in {path}")]
    EmptyDataset { path: String },
}

/// Load a dataset from N-Triples, keeping one record per triple whose
/// predicate matches `geometry_predicate` and whose object literal parses
/// as WKT. Other triples are ignored; malformed lines and bad WKT are
/// counted. An optional datatype suffix and a leading CRS IRI in the
/// literal are accepted.
pub fn load_ntriples(
    path: &Path,
    role: Role,
    geometry_predicate: &str,
) -> Result<(Dataset, LoadStats), IoError> {
    load_lines(path, role, |line, stats| {
        let triple = match parse_triple_line(line) {
            Some(t) => t,
            None => {
                stats.malformed_lines += 1;
                warn!("malformed triple line: {line:?}");
                return None;
            }
        };
        if triple.predicate != geometry_predicate {
            return None;
        }
        let mut wkt = triple.object_literal?;
        if let Some(rest) = strip_crs_iri(&wkt) {
            stats.crs_stripped += 1;
            warn!("ignoring CRS IRI on literal of {}", triple.subject);
            wkt = rest;
        }
        Some((triple.subject, wkt))
    })
}

/// Load a dataset from delimited lines: `id<delimiter>wkt`. Only the first
/// delimiter separates the columns, so WKT containing the delimiter is
/// safe; surrounding double quotes on the WKT column are stripped.
pub fn load_delimited(
    path: &Path,
    role: Role,
    delimiter: char,
) -> Result<(Dataset, LoadStats), IoError> {
    load_lines(path, role, |line, stats| {
        let Some((id, wkt)) = line.split_once(delimiter) else {
            stats.malformed_lines += 1;
            warn!("line without delimiter {delimiter:?}: {line:?}");
            return None;
        };
        let id = id.trim();
        let wkt = wkt.trim().trim_matches('"');
        if id.is_empty() || wkt.is_empty() {
            stats.malformed_lines += 1;
            return None;
        }
        Some((id.to_string(), wkt.to_string()))
    })
}

fn load_lines<F>(path: &Path, role: Role, mut extract: F) -> Result<(Dataset, LoadStats), IoError>
where
    F: FnMut(&str, &mut LoadStats) -> Option<(String, String)>,
{
    let file = File::open(path).map_err(|source| IoError::Open {
        path: path.display().to_string(),
        source,
    })?;
    let mut stats = LoadStats::default();
    let mut records: Vec<(String, Geometry)> = Vec::new();
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    for line in BufReader::new(file).lines() {
        let line = match line {
            Ok(l) => l,
            Err(_) => {
                stats.malformed_lines += 1;
                continue;
            }
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, wkt)) = extract(line, &mut stats) else {
            continue;
        };
        match parse_wkt(&wkt) {
            Ok(geometry) => {
                if seen.contains(&id) {
                    stats.duplicate_ids += 1;
                    warn!("duplicate id {id:?}; keeping the first record");
                    continue;
                }
                seen.insert(id.clone());
                records.push((id, geometry));
                stats.loaded += 1;
            }
            Err(e) => {
                stats.bad_wkt += 1;
                warn!("rejecting {id:?}: {e}");
            }
        }
    }
    let dataset = Dataset::new(role, records).map_err(|e| match e {
        DatasetError::Empty => IoError::EmptyDataset {
            path: path.display().to_string(),
        },
        other => unreachable!("loader guarantees non-empty unique ids: {other}"),
    })?;
    Ok((dataset, stats))
}

use crate::geom::Geometry;

struct TripleLine {
    subject: String,
    predicate: String,
    object_literal: Option<String>,
}

/// Minimal N-Triples line reader: `<iri> <iri> "literal"(^^<iri>|@lang)? .`
/// or an IRI object (reported with `object_literal == None`).
fn parse_triple_line(line: &str) -> Option<TripleLine> {
    let rest = line.trim();
    let (subject, rest) = take_iri(rest)?;
    let (predicate, rest) = take_iri(rest.trim_start())?;
    let rest = rest.trim_start();
    if let Some(stripped) = rest.strip_prefix('<') {
        // IRI object: a valid triple, but not a geometry literal.
        let end = stripped.find('>')?;
        let tail = stripped[end + 1..].trim();
        if tail != "." {
            return None;
        }
        return Some(TripleLine {
            subject,
            predicate,
            object_literal: None,
        });
    }
    let stripped = rest.strip_prefix('"')?;
    let (literal, tail) = take_literal_body(stripped)?;
    let tail = tail.trim_start();
    let tail = if let Some(t) = tail.strip_prefix("^^") {
        let t = t.strip_prefix('<')?;
        let end = t.find('>')?;
        t[end + 1..].trim()
    } else if let Some(t) = tail.strip_prefix('@') {
        let end = t.find(|c: char| c.is_whitespace()).unwrap_or(t.len());
        t[end..].trim()
    } else {
        tail
    };
    if tail != "." {
        return None;
    }
    Some(TripleLine {
        subject,
        predicate,
        object_literal: Some(literal),
    })
}

fn take_iri(s: &str) -> Option<(String, &str)> {
    let s = s.strip_prefix('<')?;
    let end = s.find('>')?;
    Some((s[..end].to_string(), &s[end + 1..]))
}

/// Unescape the body of a double-quoted literal, returning it and the rest
/// of the line after the closing quote.
fn take_literal_body(s: &str) -> Option<(String, &str)> {
    let mut out = String::new();
    let mut chars = s.char_indices();
    while let Some((k, c)) = chars.next() {
        match c {
            '"' => return Some((out, &s[k + 1..])),
            '\\' => {
                let (_, esc) = chars.next()?;
                match esc {
                    't' => out.push('\t'),
                    'n' => out.push('\n'),
                    'r' => out.push('\r'),
                    '"' => out.push('"'),
                    '\\' => out.push('\\'),
                    'u' => out.push(take_unicode(&mut chars, 4)?),
                    'U' => out.push(take_unicode(&mut chars, 8)?),
                    other => out.push(other),
                }
            }
            other => out.push(other),
        }
    }
    None
}

fn take_unicode(chars: &mut std::str::CharIndices, n: usize) -> Option<char> {
    let mut code = 0u32;
    for _ in 0..n {
        let (_, c) = chars.next()?;
        code = code * 16 + c.to_digit(16)?;
    }
    char::from_u32(code)
}

/// Accept `<crs-iri> WKT ...` literals; returns the WKT part when a leading
/// IRI token is present.
fn strip_crs_iri(literal: &str) -> Option<String> {
    let s = literal.trim_start();
    let rest = s.strip_prefix('<')?;
    let end = rest.find('>')?;
    Some(rest[end + 1..].trim_start().to_string())
}

/// Output format of the link writer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkFormat {
    NTriples,
    Tsv,
}

/// GeoSPARQL-style relation IRI used as the default link predicate.
pub fn default_link_predicate(r: Relation) -> &'static str {
    match r {
        Relation::Equals => "http://www.opengis.net/ont/geosparql#sfEquals",
        Relation::Intersects => "http://www.opengis.net/ont/geosparql#sfIntersects",
        Relation::Touches => "http://www.opengis.net/ont/geosparql#sfTouches",
        Relation::Crosses => "http://www.opengis.net/ont/geosparql#sfCrosses",
        Relation::Overlaps => "http://www.opengis.net/ont/geosparql#sfOverlaps",
        Relation::Within => "http://www.opengis.net/ont/geosparql#sfWithin",
        Relation::Contains => "http://www.opengis.net/ont/geosparql#sfContains",
        Relation::Disjoint => "http://www.opengis.net/ont/geosparql#sfDisjoint",
        Relation::Covers => "http://www.opengis.net/ont/geosparql#ehCovers",
        Relation::CoveredBy => "http://www.opengis.net/ont/geosparql#ehCoveredBy",
    }
}

/// Write the mapping in deterministic lexicographic order: one triple per
/// pair for N-Triples, `source<TAB>target` for TSV.
pub fn write_links(
    m: &Mapping,
    path: &Path,
    format: LinkFormat,
    predicate: &str,
) -> Result<(), IoError> {
    let wrap = |e: std::io::Error| IoError::Write {
        path: path.display().to_string(),
        source: e,
    };
    let file = File::create(path).map_err(wrap)?;
    let mut w = BufWriter::new(file);
    for (s, t) in m.iter() {
        match format {
            LinkFormat::NTriples => writeln!(w, "<{s}> <{predicate}> <{t}> .").map_err(wrap)?,
            LinkFormat::Tsv => writeln!(w, "{s}\t{t}").map_err(wrap)?,
        }
    }
    w.flush().map_err(wrap)
}

/// Flat `key=value` report, stable key order, LF endings.
pub fn render_stats(stats: &RunStats) -> String {
    format!(
        "cache_hits={}\n\
         cells_shared={}\n\
         cells_total={}\n\
         full_computations={}\n\
         index_seconds={:.6}\n\
         link_seconds={:.6}\n\
         mbb_filtered={}\n\
         pair_failures={}\n\
         reversed={}\n\
         setup_seconds={:.6}\n\
         total_seconds={:.6}\n",
        stats.cache_hits,
        stats.cells_shared,
        stats.cells_total,
        stats.full_computations,
        stats.index_seconds,
        stats.link_seconds,
        stats.mbb_filtered,
        stats.pair_failures,
        stats.reversed,
        stats.setup_seconds,
        stats.total_seconds,
    )
}

pub fn write_stats(stats: &RunStats, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, render_stats(stats)).map_err(|e| IoError::Write {
        path: path.display().to_string(),
        source: e,
    })
}
