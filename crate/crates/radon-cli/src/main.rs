//! Command-line front end: `link` discovers topological relations between
//! two datasets, `oracle` verifies a run against the brute-force reference,
//! `bench` measures the engine against the naive strategy on synthetic
//! corpora.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use radon::dataset::{Dataset, Role};
use radon::executor::ExecutorConfig;
use radon::io::{self, LinkFormat};
use radon::linker::{self, DedupMode, LinkConfig};
use radon::relation::{Relation, CORE_RELATIONS};
use radon::tiling::{DeltaMode, Heuristic};

use radon_cli::bench;
use radon_cli::synth::{generate_dataset, SyntheticCorpusSpec};

/// Exit codes: 0 success; 1 runtime failure (per-pair evaluation failures,
/// non-empty oracle diff, result mismatch in bench, write errors); 2 usage
/// or configuration error; 3 input data error (unreadable or empty
/// datasets).
const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "radon",
    version,
    about = "Rapid discovery of topological relations between vector geometries"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute all (source, target) pairs standing in the given relation.
    Link(LinkArgs),
    /// Run link and the brute-force reference, print their differences.
    Oracle(OracleArgs),
    /// Compare against the naive strategy on a synthetic corpus.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Nt,
    Tsv,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Nt,
    Tsv,
}

#[derive(Args)]
struct IngestArgs {
    /// Source dataset file.
    #[arg(long)]
    source: PathBuf,
    /// Parsed from the file extension when omitted (defaults to nt).
    #[arg(long, value_enum)]
    source_format: Option<InputFormat>,
    /// Target dataset file.
    #[arg(long)]
    target: PathBuf,
    #[arg(long, value_enum)]
    target_format: Option<InputFormat>,
    /// Predicate carrying WKT literals in N-Triples input.
    #[arg(long, default_value = io::GEO_WKT_PREDICATE)]
    geometry_predicate: String,
}

#[derive(Args)]
struct TuningArgs {
    /// Granularity heuristic: min, max, avg, median, or fixed:VALUE.
    #[arg(long, default_value = "avg")]
    heuristic: String,
    /// How the heuristic value becomes a granularity: literal | reciprocal.
    #[arg(long, default_value = "literal")]
    delta_mode: String,
    /// Worker threads for link generation.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Cells per scheduled work chunk.
    #[arg(long, default_value_t = 1000)]
    chunk_size: usize,
    /// Disable the hypervolume-based dataset swapping.
    #[arg(long)]
    no_swap: bool,
    #[arg(long, hide = true)]
    work_stealing: bool,
    /// Literal shared seen-set deduplication instead of owner cells.
    #[arg(long, hide = true)]
    shared_set_dedup: bool,
}

#[derive(Args)]
struct LinkArgs {
    #[command(flatten)]
    ingest: IngestArgs,
    /// Relation to discover.
    #[arg(long)]
    relation: String,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Links file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "nt")]
    output_format: OutputFormat,
    /// Stats report file (key=value lines).
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Link predicate IRI; a GeoSPARQL-style default per relation.
    #[arg(long)]
    predicate: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    ingest: IngestArgs,
    /// Relation to verify.
    #[arg(long)]
    relation: String,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Print at most this many differing pairs.
    #[arg(long, default_value_t = 20)]
    max_diff_lines: usize,
    /// Fault injection for the diff harness: makes the bounding-box filter
    /// unsound so misses become observable.
    #[arg(long, hide = true)]
    inject_filter_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Relation to measure, or `all` for the seven core relations.
    #[arg(long, default_value = "all")]
    relation: String,
    /// Corpus seed; fixed seed, fixed corpus.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cluster patches in the synthetic corpus.
    #[arg(long, default_value_t = 10)]
    clusters: usize,
    /// Geometries per synthetic dataset.
    #[arg(long, default_value_t = 300)]
    count: usize,
    /// Fraction of shapes generated across the antimeridian.
    #[arg(long, default_value_t = 0.02)]
    antimeridian_frac: f64,
    /// Timing repetitions (median reported).
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Use these datasets instead of a synthetic corpus.
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long, value_enum)]
    source_format: Option<InputFormat>,
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long, value_enum)]
    target_format: Option<InputFormat>,
    /// Per-heuristic runtime study over seeded corpora.
    #[arg(long)]
    heuristic_study: bool,
    /// Number of seeded corpora in the study.
    #[arg(long, default_value_t = 10)]
    study_corpora: usize,
}

enum CmdError {
    Usage(String),
    Input(String),
    Runtime(String),
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Usage(m) | CmdError::Input(m) | CmdError::Runtime(m) => f.write_str(m),
        }
    }
}

impl CmdError {
    fn code(&self) -> u8 {
        match self {
            CmdError::Usage(_) => EXIT_USAGE,
            CmdError::Input(_) => EXIT_INPUT,
            CmdError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RADON_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Link(args) => cmd_link(args),
        Cmd::Oracle(args) => cmd_oracle(args),
        Cmd::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn parse_relation(token: &str) -> Result<Relation, CmdError> {
    token
        .parse::<Relation>()
        .map_err(|e| CmdError::Usage(e.to_string()))
}

fn build_config(tuning: &TuningArgs, fault: bool) -> Result<LinkConfig, CmdError> {
    let heuristic: Heuristic = tuning
        .heuristic
        .parse()
        .map_err(|e: radon::tiling::BadHeuristic| CmdError::Usage(e.to_string()))?;
    let delta_mode: DeltaMode = tuning
        .delta_mode
        .parse()
        .map_err(|e: radon::tiling::BadDeltaMode| CmdError::Usage(e.to_string()))?;
    if tuning.threads == 0 {
        return Err(CmdError::Usage("--threads must be at least 1".into()));
    }
    if tuning.chunk_size == 0 {
        return Err(CmdError::Usage("--chunk-size must be at least 1".into()));
    }
    Ok(LinkConfig {
        heuristic,
        delta_mode,
        swap: !tuning.no_swap,
        executor: ExecutorConfig {
            workers: tuning.threads,
            chunk_size: tuning.chunk_size,
            work_stealing: tuning.work_stealing,
        },
        dedup: if tuning.shared_set_dedup {
            DedupMode::SharedSet
        } else {
            DedupMode::OwnerCell
        },
        break_filter_soundness: fault,
    })
}

fn detect_format(path: &Path, explicit: Option<InputFormat>) -> InputFormat {
    explicit.unwrap_or_else(|| {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("tsv") => InputFormat::Tsv,
            Some("csv") => InputFormat::Csv,
            _ => InputFormat::Nt,
        }
    })
}

fn load(
    path: &Path,
    format: InputFormat,
    role: Role,
    predicate: &str,
) -> Result<Dataset, CmdError> {
    let loaded = match format {
        InputFormat::Nt => io::load_ntriples(path, role, predicate),
        InputFormat::Tsv => io::load_delimited(path, role, '\t'),
        InputFormat::Csv => io::load_delimited(path, role, ','),
    };
    let (dataset, stats) = loaded.map_err(|e| CmdError::Input(e.to_string()))?;
    let role_name = match role {
        Role::Source => "source",
        Role::Target => "target",
    };
    log::info!(
        "{role_name}: {} resources ({} malformed, {} bad WKT, {} duplicates)",
        stats.loaded,
        stats.malformed_lines,
        stats.bad_wkt,
        stats.duplicate_ids
    );
    Ok(dataset)
}

fn load_both(ingest: &IngestArgs) -> Result<(Dataset, Dataset), CmdError> {
    let s = load(
        &ingest.source,
        detect_format(&ingest.source, ingest.source_format),
        Role::Source,
        &ingest.geometry_predicate,
    )?;
    let t = load(
        &ingest.target,
        detect_format(&ingest.target, ingest.target_format),
        Role::Target,
        &ingest.geometry_predicate,
    )?;
    Ok((s, t))
}

/// Output and stats paths must not clobber the input files or each other.
fn check_path_collisions(
    ingest: &IngestArgs,
    outputs: &[Option<&PathBuf>],
) -> Result<(), CmdError> {
    let mut produced: Vec<&PathBuf> = Vec::new();
    for out in outputs.iter().flatten() {
        if **out == ingest.source || **out == ingest.target {
            return Err(CmdError::Usage(format!(
                "output path {} collides with an input path",
                out.display()
            )));
        }
        if produced.contains(out) {
            return Err(CmdError::Usage(format!(
                "output path {} used twice",
                out.display()
            )));
        }
        produced.push(out);
    }
    Ok(())
}

fn cmd_link(args: LinkArgs) -> Result<(), CmdError> {
    let relation = parse_relation(&args.relation)?;
    let cfg = build_config(&args.tuning, false)?;
    check_path_collisions(&args.ingest, &[args.output.as_ref(), args.stats.as_ref()])?;
    let (s, t) = load_both(&args.ingest)?;

    let (mapping, stats) =
        linker::link(&s, &t, relation, &cfg).map_err(|e| CmdError::Runtime(e.to_string()))?;

    let predicate = args
        .predicate
        .clone()
        .unwrap_or_else(|| io::default_link_predicate(relation).to_string());
    match &args.output {
        Some(path) => {
            let format = match args.output_format {
                OutputFormat::Nt => LinkFormat::NTriples,
                OutputFormat::Tsv => LinkFormat::Tsv,
            };
            io::write_links(&mapping, path, format, &predicate)
                .map_err(|e| CmdError::Runtime(e.to_string()))?;
        }
        None => {
            for (a, b) in mapping.iter() {
                match args.output_format {
                    OutputFormat::Nt => println!("<{a}> <{predicate}> <{b}> ."),
                    OutputFormat::Tsv => println!("{a}\t{b}"),
                }
            }
        }
    }
    if let Some(path) = &args.stats {
        io::write_stats(&stats, path).map_err(|e| CmdError::Runtime(e.to_string()))?;
    }
    eprintln!(
        "{} links; {} full computations, {} filtered, {} cache hits, {:.3}s total",
        mapping.len(),
        stats.full_computations,
        stats.mbb_filtered,
        stats.cache_hits,
        stats.total_seconds
    );
    if stats.pair_failures > 0 {
        return Err(CmdError::Runtime(format!(
            "{} pair evaluations failed and were excluded",
            stats.pair_failures
        )));
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CmdError> {
    let relation = parse_relation(&args.relation)?;
    let cfg = build_config(&args.tuning, args.inject_filter_fault)?;
    let (s, t) = load_both(&args.ingest)?;

    let (engine, stats) =
        linker::link(&s, &t, relation, &cfg).map_err(|e| CmdError::Runtime(e.to_string()))?;
    let (reference, ref_failures) = linker::brute_force_link(&s, &t, relation);

    let diff = engine.symmetric_difference(&reference);
    let true_links = reference.len();
    let found = engine.len();
    let (precision, recall) = precision_recall(&engine, &reference);
    let f_measure = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    println!(
        "relation={relation} engine_links={found} reference_links={true_links} \
         diff={} precision={precision:.4} recall={recall:.4} f_measure={f_measure:.4} \
         full_computations={}",
        diff.len(),
        stats.full_computations
    );
    for (a, b) in diff.iter().take(args.max_diff_lines) {
        let side = if engine.contains(a, b) {
            "engine-only"
        } else {
            "missing"
        };
        println!("{side}\t{a}\t{b}");
    }
    if diff.len() > args.max_diff_lines {
        println!("... {} more", diff.len() - args.max_diff_lines);
    }
    if stats.pair_failures > 0 || ref_failures > 0 {
        return Err(CmdError::Runtime(format!(
            "{} pair evaluations failed",
            stats.pair_failures + ref_failures
        )));
    }
    if !diff.is_empty() {
        return Err(CmdError::Runtime(format!(
            "engine and reference disagree on {} pairs",
            diff.len()
        )));
    }
    Ok(())
}

fn precision_recall(engine: &linker::Mapping, reference: &linker::Mapping) -> (f64, f64) {
    let mut hits = 0usize;
    for (a, b) in engine.iter() {
        if reference.contains(a, b) {
            hits += 1;
        }
    }
    let precision = if engine.is_empty() {
        1.0
    } else {
        hits as f64 / engine.len() as f64
    };
    let recall = if reference.is_empty() {
        1.0
    } else {
        hits as f64 / reference.len() as f64
    };
    (precision, recall)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CmdError> {
    let cfg = build_config(&args.tuning, false)?;
    let relations: Vec<Relation> = if args.relation.eq_ignore_ascii_case("all") {
        CORE_RELATIONS.to_vec()
    } else {
        vec![parse_relation(&args.relation)?]
    };

    if args.heuristic_study {
        let seeds: Vec<u64> = (0..args.study_corpora as u64)
            .map(|k| args.seed + k)
            .collect();
        let relation = if args.relation.eq_ignore_ascii_case("all") {
            Relation::Intersects
        } else {
            relations[0]
        };
        let rows =
            bench::heuristic_study(args.count, args.clusters, &seeds, relation, &cfg, args.reps);
        print!("{}", bench::render_study(&rows));
        let within = rows.iter().filter(|r| r.avg_over_best <= 1.25).count();
        eprintln!(
            "avg heuristic within 25% of the per-corpus best on {within}/{} corpora",
            rows.len()
        );
        return Ok(());
    }

    let (s, t) = match (&args.source, &args.target) {
        (Some(sp), Some(tp)) => {
            let s = load(
                sp,
                detect_format(sp, args.source_format),
                Role::Source,
                io::GEO_WKT_PREDICATE,
            )?;
            let t = load(
                tp,
                detect_format(tp, args.target_format),
                Role::Target,
                io::GEO_WKT_PREDICATE,
            )?;
            (s, t)
        }
        (None, None) => {
            let mut spec_s = SyntheticCorpusSpec::mixed(
                args.count,
                args.clusters,
                args.seed,
                args.seed * 31 + 1,
            );
            let mut spec_t = SyntheticCorpusSpec::mixed(
                args.count,
                args.clusters,
                args.seed,
                args.seed * 31 + 2,
            );
            spec_s.antimeridian_fraction = args.antimeridian_frac;
            spec_t.antimeridian_fraction = args.antimeridian_frac;
            (
                generate_dataset(&spec_s, Role::Source, "s"),
                generate_dataset(&spec_t, Role::Target, "t"),
            )
        }
        _ => {
            return Err(CmdError::Usage(
                "--source and --target must be given together".into(),
            ))
        }
    };

    let t0 = Instant::now();
    let rows: Vec<bench::BenchRow> = relations
        .iter()
        .map(|&r| bench::compare(&s, &t, r, &cfg, args.reps))
        .collect();
    print!("{}", bench::render_rows(&rows));
    eprintln!(
        "benchmarked {} relation(s) on {}x{} in {:.1}s",
        rows.len(),
        s.len(),
        t.len(),
        t0.elapsed().as_secs_f64()
    );
    if rows.iter().any(|r| !r.matches_naive) {
        return Err(CmdError::Runtime(
            "engine mapping disagrees with the naive reference".into(),
        ));
    }
    Ok(())
}
