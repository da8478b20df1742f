//! End-to-end link discovery: swap planning, granularity selection, sparse
//! index construction, per-cell candidate enumeration with deduplication,
//! bounding-box filtering, relation evaluation, and mapping assembly — plus
//! the all-pairs reference used as correctness oracle.

use std::collections::{BTreeSet, HashSet};
use std::sync::Mutex;
use std::time::Instant;

use log::warn;

use crate::dataset::Dataset;
use crate::executor::{self, ExecutorConfig, ExecutorError};
use crate::relation::{test_mbb, FilterVerdict, Relation};
use crate::tiling::{self, build_index, DeltaMode, Heuristic, SparseTileIndex};

/// The discovered link set: pairs of (source id, target id) for which the
/// relation holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub relation: Relation,
    pairs: BTreeSet<(String, String)>,
}

impl Mapping {
    pub fn new(relation: Relation) -> Mapping {
        Mapping {
            relation,
            pairs: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, source: String, target: String) {
        self.pairs.insert((source, target));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, source: &str, target: &str) -> bool {
        self.pairs
            .contains(&(source.to_string(), target.to_string()))
    }

    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &(String, String)> {
        self.pairs.iter()
    }

    /// Pairs present in exactly one of the two mappings.
    pub fn symmetric_difference(&self, other: &Mapping) -> Vec<(String, String)> {
        self.pairs
            .symmetric_difference(&other.pairs)
            .cloned()
            .collect()
    }
}

/// Counters and timings of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    /// Relation evaluations actually executed (including failed ones).
    pub full_computations: u64,
    /// Pairs rejected by the bounding-box filter.
    pub mbb_filtered: u64,
    /// Pair encounters skipped because the pair was already handled in
    /// another cell.
    pub cache_hits: u64,
    /// Evaluations that ended in a kernel error; the pair is excluded.
    pub pair_failures: u64,
    pub cells_total: u64,
    pub cells_shared: u64,
    pub reversed: bool,
    pub setup_seconds: f64,
    pub index_seconds: f64,
    pub link_seconds: f64,
    pub total_seconds: f64,
}

impl RunStats {
    /// Total candidate pair encounters across all shared cells.
    pub fn encounters(&self) -> u64 {
        self.full_computations + self.mbb_filtered + self.cache_hits
    }
}

/// How repeated pair encounters are suppressed: by the owner-cell rule
/// (the lexicographically smallest shared cell processes the pair) or by a
/// literal shared seen-set behind a lock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DedupMode {
    #[default]
    OwnerCell,
    SharedSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub heuristic: Heuristic,
    pub delta_mode: DeltaMode,
    /// Apply the ETH-based swapping strategy.
    pub swap: bool,
    pub executor: ExecutorConfig,
    pub dedup: DedupMode,
    /// Test-only fault injection: turns the bounding-box filter into an
    /// unsound one so the oracle diff harness has something to catch.
    pub break_filter_soundness: bool,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            heuristic: Heuristic::Avg,
            delta_mode: DeltaMode::Literal,
            swap: true,
            executor: ExecutorConfig::default(),
            dedup: DedupMode::OwnerCell,
            break_filter_soundness: false,
        }
    }
}

/// Discover all pairs (s, t) of source × target for which the relation
/// holds. Complete and correct: equal to [`brute_force_link`] output.
pub fn link(
    s: &Dataset,
    t: &Dataset,
    r: Relation,
    cfg: &LinkConfig,
) -> Result<(Mapping, RunStats), ExecutorError> {
    let t_total = Instant::now();
    let mut stats = RunStats::default();

    let t_setup = Instant::now();
    let plan = if cfg.swap {
        tiling::plan_swap(s, t, r)
    } else {
        tiling::SwapPlan {
            swapped: false,
            relation: r,
        }
    };
    let (src, tgt) = if plan.swapped { (t, s) } else { (s, t) };
    let granularity = tiling::select_granularity(src, tgt, cfg.heuristic, cfg.delta_mode);
    stats.reversed = plan.swapped;
    stats.setup_seconds = t_setup.elapsed().as_secs_f64();

    let t_index = Instant::now();
    let index = build_index(src, tgt, &granularity);
    stats.cells_total = index.source_cells().len() as u64;
    stats.cells_shared = index.target_cells().len() as u64;
    stats.index_seconds = t_index.elapsed().as_secs_f64();

    let t_link = Instant::now();
    let job = CellJob {
        source: src,
        target: tgt,
        relation: plan.relation,
        index: &index,
        dedup: cfg.dedup,
        break_filter_soundness: cfg.break_filter_soundness,
        seen: Mutex::new(HashSet::new()),
    };
    let cells = index.shared_cells();
    let outcomes = executor::run_cells(&cells, &cfg.executor, |cell| job.process_cell(cell))?;
    stats.link_seconds = t_link.elapsed().as_secs_f64();

    let mut mapping = Mapping::new(r);
    for outcome in outcomes {
        stats.full_computations += outcome.full_computations;
        stats.mbb_filtered += outcome.mbb_filtered;
        stats.cache_hits += outcome.cache_hits;
        stats.pair_failures += outcome.pair_failures;
        for (si, ti) in outcome.pairs {
            let s_id = src.resources()[si as usize].id.clone();
            let t_id = tgt.resources()[ti as usize].id.clone();
            if plan.swapped {
                // Undo the swap: report pairs in the caller's orientation.
                mapping.insert(t_id, s_id);
            } else {
                mapping.insert(s_id, t_id);
            }
        }
    }
    stats.total_seconds = t_total.elapsed().as_secs_f64();
    Ok((mapping, stats))
}

/// Evaluate the relation on every pair directly; quadratic, used as the
/// correctness oracle. Returns the mapping and the count of per-pair
/// evaluation failures.
pub fn brute_force_link(s: &Dataset, t: &Dataset, r: Relation) -> (Mapping, u64) {
    let mut mapping = Mapping::new(r);
    let mut failures = 0;
    for rs in s.resources() {
        for rt in t.resources() {
            match r.evaluate(&rs.geometry, &rt.geometry) {
                Ok(true) => mapping.insert(rs.id.clone(), rt.id.clone()),
                Ok(false) => {}
                Err(e) => {
                    failures += 1;
                    warn!("skipping pair ({}, {}): {e}", rs.id, rt.id);
                }
            }
        }
    }
    (mapping, failures)
}

struct CellOutcome {
    pairs: Vec<(u32, u32)>,
    full_computations: u64,
    mbb_filtered: u64,
    cache_hits: u64,
    pair_failures: u64,
}

struct CellJob<'a> {
    source: &'a Dataset,
    target: &'a Dataset,
    relation: Relation,
    index: &'a SparseTileIndex,
    dedup: DedupMode,
    break_filter_soundness: bool,
    seen: Mutex<HashSet<(u32, u32)>>,
}

impl CellJob<'_> {
    fn process_cell(&self, cell: tiling::CellIndex) -> CellOutcome {
        let mut out = CellOutcome {
            pairs: Vec::new(),
            full_computations: 0,
            mbb_filtered: 0,
            cache_hits: 0,
            pair_failures: 0,
        };
        let sources = &self.index.source_cells()[&cell];
        let targets = &self.index.target_cells()[&cell];
        for &si in sources {
            for &ti in targets {
                let fresh = match self.dedup {
                    DedupMode::OwnerCell => self.index.owner_cell(si, ti) == Some(cell),
                    DedupMode::SharedSet => self
                        .seen
                        .lock()
                        .expect("unpoisoned seen set")
                        .insert((si, ti)),
                };
                if !fresh {
                    out.cache_hits += 1;
                    continue;
                }
                let rs = &self.source.resources()[si as usize];
                let rt = &self.target.resources()[ti as usize];
                if !self.filter(&rs.mbb, &rt.mbb).proceed {
                    out.mbb_filtered += 1;
                    continue;
                }
                out.full_computations += 1;
                match self.relation.evaluate(&rs.geometry, &rt.geometry) {
                    Ok(true) => out.pairs.push((si, ti)),
                    Ok(false) => {}
                    Err(e) => {
                        out.pair_failures += 1;
                        warn!("skipping pair ({}, {}): {e}", rs.id, rt.id);
                    }
                }
            }
        }
        out
    }

    fn filter(&self, mbb_s: &crate::geom::Mbb, mbb_t: &crate::geom::Mbb) -> FilterVerdict {
        if self.break_filter_soundness {
            // Injected fault: demand target-contains-source for every
            // relation, which wrongly discards valid pairs.
            return FilterVerdict {
                proceed: mbb_t.contains(mbb_s),
            };
        }
        test_mbb(self.relation, mbb_s, mbb_t)
    }
}
