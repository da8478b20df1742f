//! Naive-vs-engine comparison on synthetic corpora and the granularity
//! heuristic study. Reports are tab-separated tables.

use std::time::Instant;

use radon::dataset::{Dataset, Role};
use radon::linker::{self, LinkConfig};
use radon::relation::Relation;
use radon::tiling::Heuristic;

use crate::synth::{generate_dataset, SyntheticCorpusSpec};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub relation: Relation,
    pub naive_computations: u64,
    pub full_computations: u64,
    pub reduction_factor: f64,
    pub naive_seconds: f64,
    pub engine_seconds: f64,
    pub speedup: f64,
    pub links: usize,
    pub matches_naive: bool,
}

/// Run one relation over the datasets with both strategies; timings are
/// medians over `reps` repetitions.
pub fn compare(
    s: &Dataset,
    t: &Dataset,
    relation: Relation,
    cfg: &LinkConfig,
    reps: usize,
) -> BenchRow {
    let reps = reps.max(1);
    let mut naive_times = Vec::with_capacity(reps);
    let mut engine_times = Vec::with_capacity(reps);
    let mut naive_mapping = None;
    let mut engine = None;
    for _ in 0..reps {
        let t0 = Instant::now();
        let (m, _) = linker::brute_force_link(s, t, relation);
        naive_times.push(t0.elapsed().as_secs_f64());
        naive_mapping = Some(m);

        let t0 = Instant::now();
        let out = linker::link(s, t, relation, cfg).expect("workers do not panic");
        engine_times.push(t0.elapsed().as_secs_f64());
        engine = Some(out);
    }
    let naive_mapping = naive_mapping.expect("at least one rep");
    let (mapping, stats) = engine.expect("at least one rep");
    let naive_computations = (s.len() * t.len()) as u64;
    let naive_seconds = median(&mut naive_times);
    let engine_seconds = median(&mut engine_times);
    BenchRow {
        relation,
        naive_computations,
        full_computations: stats.full_computations,
        reduction_factor: naive_computations as f64 / stats.full_computations.max(1) as f64,
        naive_seconds,
        engine_seconds,
        speedup: naive_seconds / engine_seconds.max(1e-9),
        links: mapping.len(),
        matches_naive: mapping == naive_mapping,
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

pub fn render_rows(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "relation\tnaive_computations\tfull_computations\treduction_factor\t\
         naive_seconds\tengine_seconds\tspeedup\tlinks\tmatches_naive\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.2}\t{:.4}\t{:.4}\t{:.2}\t{}\t{}\n",
            r.relation,
            r.naive_computations,
            r.full_computations,
            r.reduction_factor,
            r.naive_seconds,
            r.engine_seconds,
            r.speedup,
            r.links,
            r.matches_naive,
        ));
    }
    out
}

#[derive(Debug, Clone)]
pub struct StudyRow {
    pub corpus_seed: u64,
    pub seconds: [f64; 4],
    pub best: Heuristic,
    /// avg-heuristic runtime over the per-corpus best.
    pub avg_over_best: f64,
}

pub const STUDY_HEURISTICS: [Heuristic; 4] = [
    Heuristic::Min,
    Heuristic::Max,
    Heuristic::Avg,
    Heuristic::Median,
];

/// Per-heuristic link runtimes over seeded corpora; timings are medians
/// over `reps` repetitions of the link phase.
pub fn heuristic_study(
    count: usize,
    clusters: usize,
    seeds: &[u64],
    relation: Relation,
    base_cfg: &LinkConfig,
    reps: usize,
) -> Vec<StudyRow> {
    let mut rows = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let spec_s = SyntheticCorpusSpec::mixed(count, clusters, seed, seed.wrapping_mul(31) + 1);
        let spec_t = SyntheticCorpusSpec::mixed(count, clusters, seed, seed.wrapping_mul(31) + 2);
        let s = generate_dataset(&spec_s, Role::Source, "s");
        let t = generate_dataset(&spec_t, Role::Target, "t");
        let mut seconds = [0.0f64; 4];
        for (k, h) in STUDY_HEURISTICS.iter().enumerate() {
            let cfg = LinkConfig {
                heuristic: *h,
                ..base_cfg.clone()
            };
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps.max(1) {
                let t0 = Instant::now();
                let _ = linker::link(&s, &t, relation, &cfg).expect("workers do not panic");
                times.push(t0.elapsed().as_secs_f64());
            }
            seconds[k] = median(&mut times);
        }
        let best_idx = (0..4)
            .min_by(|&a, &b| seconds[a].partial_cmp(&seconds[b]).unwrap())
            .unwrap();
        rows.push(StudyRow {
            corpus_seed: seed,
            seconds,
            best: STUDY_HEURISTICS[best_idx],
            avg_over_best: seconds[2] / seconds[best_idx].max(1e-9),
        });
    }
    rows
}

pub fn render_study(rows: &[StudyRow]) -> String {
    let mut out = String::from("corpus_seed\tmin\tmax\tavg\tmedian\tbest\tavg_over_best\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:?}\t{:.3}\n",
            r.corpus_seed,
            r.seconds[0],
            r.seconds[1],
            r.seconds[2],
            r.seconds[3],
            r.best,
            r.avg_over_best,
        ));
    }
    out
}
