//! Binary-level checks: flags, formats, exit codes, output files.

mod support;

use std::path::Path;

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn fixture(dir: &Path) -> (String, String) {
    let s = dir.join("s.tsv");
    let t = dir.join("t.tsv");
    write(
        &s,
        "a\tPOLYGON ((0 0, 2 0, 2 2, 0 2, 0 0))\n\
         b\tPOLYGON ((10 10, 12 10, 12 12, 10 12, 10 10))\n",
    );
    write(
        &t,
        "x\tPOLYGON ((1 1, 3 1, 3 3, 1 3, 1 1))\n\
         y\tPOINT (11 11)\n",
    );
    (
        s.to_str().unwrap().to_string(),
        t.to_str().unwrap().to_string(),
    )
}

#[test]
fn link_writes_links_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = fixture(dir.path());
    let out = dir.path().join("links.nt");
    let stats = dir.path().join("stats.txt");
    let res = support::run(&[
        "link",
        "--source",
        &s,
        "--target",
        &t,
        "--relation",
        "intersects",
        "--output",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let links = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        links,
        "<a> <http://www.opengis.net/ont/geosparql#sfIntersects> <x> .\n\
         <b> <http://www.opengis.net/ont/geosparql#sfIntersects> <y> .\n"
    );
    let stats = std::fs::read_to_string(&stats).unwrap();
    assert!(stats.contains("full_computations="), "{stats}");
    assert!(stats.lines().count() == 11, "{stats}");
}

#[test]
fn link_tsv_to_stdout_with_custom_predicate() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = fixture(dir.path());
    let res = support::run(&[
        "link",
        "--source",
        &s,
        "--target",
        &t,
        "--relation",
        "within",
        "--output-format",
        "tsv",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&res.stdout), "");

    let res = support::run(&[
        "link",
        "--source",
        &s,
        "--target",
        &t,
        "--relation",
        "contains",
        "--predicate",
        "http://ex/covers",
    ]);
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert_eq!(stdout, "<b> <http://ex/covers> <y> .\n");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = fixture(dir.path());
    for args in [
        vec![
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "nonsense",
        ],
        vec![
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "within",
            "--heuristic",
            "best",
        ],
        vec![
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "within",
            "--heuristic",
            "fixed:-1",
        ],
        vec![
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "within",
            "--delta-mode",
            "inverse",
        ],
        vec![
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "within",
            "--threads",
            "0",
        ],
        // Output clobbering an input.
        vec![
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "within",
            "--output",
            &s,
        ],
        // Missing required flag (clap handles this one).
        vec!["link", "--source", &s, "--relation", "within"],
    ] {
        let res = support::run(&args);
        assert_eq!(res.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let (s, _) = fixture(dir.path());
    let empty = dir.path().join("empty.tsv");
    write(&empty, "# nothing here\n");
    let missing = dir.path().join("missing.tsv");
    for target in [empty.to_str().unwrap(), missing.to_str().unwrap()] {
        let res = support::run(&[
            "link",
            "--source",
            &s,
            "--target",
            target,
            "--relation",
            "within",
        ]);
        assert_eq!(res.status.code(), Some(3), "target={target}");
    }
}

#[test]
fn oracle_diff_and_fault_injection() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = fixture(dir.path());
    let res = support::run(&[
        "oracle",
        "--source",
        &s,
        "--target",
        &t,
        "--relation",
        "intersects",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stdout).contains("diff=0"));

    let res = support::run(&[
        "oracle",
        "--source",
        &s,
        "--target",
        &t,
        "--relation",
        "intersects",
        "--inject-filter-fault",
    ]);
    assert_eq!(res.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("missing"), "{stdout}");
}

#[test]
fn ntriples_ingestion_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("s.nt");
    let tgt = dir.path().join("t.nt");
    write(
        &src,
        "<http://ex/a> <http://www.opengis.net/ont/geosparql#asWKT> \
         \"POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0))\"^^<http://www.opengis.net/ont/geosparql#wktLiteral> .\n",
    );
    write(
        &tgt,
        "<http://ex/b> <http://www.opengis.net/ont/geosparql#asWKT> \"POINT (2 2)\" .\n\
         bad line\n",
    );
    let out = dir.path().join("links.tsv");
    let res = support::run(&[
        "link",
        "--source",
        src.to_str().unwrap(),
        "--target",
        tgt.to_str().unwrap(),
        "--relation",
        "covers",
        "--output",
        out.to_str().unwrap(),
        "--output-format",
        "tsv",
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    // Referential integrity: only ingested ids appear in the output.
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "http://ex/a\thttp://ex/b\n"
    );
}

#[test]
fn bench_reports_table_and_determinism() {
    let res = support::run(&[
        "bench",
        "--count",
        "40",
        "--clusters",
        "3",
        "--seed",
        "11",
        "--relation",
        "within",
        "--reps",
        "1",
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8_lossy(&res.stdout);
    let mut lines = stdout.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("relation\tnaive_computations"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("within\t"), "{row}");
    assert!(row.ends_with("true"), "row should match naive: {row}");
    let cols: Vec<&str> = row.split('\t').collect();
    let naive: u64 = cols[1].parse().unwrap();
    let full: u64 = cols[2].parse().unwrap();
    assert!(full <= naive, "{row}");

    // Fixed seed, identical output.
    let res2 = support::run(&[
        "bench",
        "--count",
        "40",
        "--clusters",
        "3",
        "--seed",
        "11",
        "--relation",
        "within",
        "--reps",
        "1",
    ]);
    let stdout2 = String::from_utf8_lossy(&res2.stdout);
    let stable = |s: &str| {
        s.lines()
            .map(|l| {
                l.split('\t')
                    .enumerate()
                    // Timing columns vary run to run.
                    .filter(|(k, _)| ![4, 5, 6].contains(k))
                    .map(|(_, v)| v.to_string())
                    .collect::<Vec<_>>()
                    .join("\t")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(stable(&stdout), stable(&stdout2));
}

#[test]
fn workers_sweep_is_deterministic_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = fixture(dir.path());
    let mut outputs = Vec::new();
    for threads in ["1", "2", "4", "8"] {
        let res = support::run(&[
            "link",
            "--source",
            &s,
            "--target",
            &t,
            "--relation",
            "intersects",
            "--threads",
            threads,
            "--chunk-size",
            "1",
            "--output-format",
            "tsv",
        ]);
        assert_eq!(res.status.code(), Some(0));
        outputs.push(String::from_utf8_lossy(&res.stdout).to_string());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}
